#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ottoforge/errors.hpp"
#include "ottoforge/types.hpp"

namespace ottoforge {

enum class BathFamily { FermionicFlat, BosonicOhmic, FixedRate, Peaked };

std::string to_string(BathFamily f);
BathFamily bath_family_from_string(const std::string& s);

/// A directed transition constant of a peaked bath: the rate from level
/// `from` to level `to` while the control sits on the bath's target point.
/// The reverse rate follows from detailed balance.
struct PeakedPair {
  int from = 0;
  int to = 0;
  double rate = 0.0;
};

struct BathModel {
  double beta = 1.0;
  BathFamily family = BathFamily::FermionicFlat;

  double gamma = 0.0;                   // coupling, fermionic/bosonic
  double rate = 0.0;                    // scalar thermalization rate, fixed-rate
  std::vector<double> targets;          // peaked: target non-ground energies
  std::vector<PeakedPair> pair_rates;   // peaked: directed constants
  double match_tol = 1e-9;              // peaked: |eps - target| tolerance

  void validate(int dimension) const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("bath beta must be positive and finite");
    switch (family) {
      case BathFamily::FermionicFlat:
      case BathFamily::BosonicOhmic:
        if (!(gamma > 0.0)) throw InvalidInput("bath gamma must be positive");
        break;
      case BathFamily::FixedRate:
        if (!(rate > 0.0)) throw InvalidInput("fixed-rate bath rate must be positive");
        break;
      case BathFamily::Peaked: {
        if (static_cast<int>(targets.size()) != dimension - 1) {
          throw InvalidInput("peaked bath target list must have d-1 entries");
        }
        if (pair_rates.empty()) throw InvalidInput("peaked bath needs at least one pair rate");
        bool any_positive = false;
        for (const auto& p : pair_rates) {
          if (p.from < 0 || p.from >= dimension || p.to < 0 || p.to >= dimension || p.from == p.to) {
            throw InvalidInput("peaked pair rate has invalid level indices");
          }
          if (p.rate < 0.0 || !std::isfinite(p.rate)) throw InvalidInput("peaked pair rate must be >= 0");
          if (p.rate > 0.0) any_positive = true;
        }
        if (!any_positive) throw InvalidInput("peaked bath needs a strictly positive rate");
        if (!(match_tol > 0.0)) throw InvalidInput("peaked match tolerance must be positive");
        break;
      }
    }
  }
};

}  // namespace ottoforge
