#include "ottoforge/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ottoforge {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidInput("config error at " + path + ": " + what);
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
  }
}

double get_number(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(path + "." + key, "missing required number");
  const Json& v = j.at(key);
  if (v.is_string()) {
    try {
      return std::stod(v.get<std::string>());
    } catch (...) {
      fail(path + "." + key, "expected a number");
    }
  }
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const Json& j, const std::string& key, const std::string& path, double dflt) {
  if (!j.contains(key)) return dflt;
  return get_number(j, key, path);
}

int get_int(const Json& j, const std::string& key, const std::string& path) {
  const double v = get_number(j, key, path);
  if (std::floor(v) != v) fail(path + "." + key, "expected an integer");
  return static_cast<int>(v);
}

std::string get_string(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || !j.at(key).is_string()) fail(path + "." + key, "missing required string");
  return j.at(key).get<std::string>();
}

BathModel parse_bath(const Json& j, const std::string& path) {
  check_keys(j, {"beta", "family", "gamma", "rate", "targets", "pair_rates", "match_tol"}, path);
  BathModel b;
  b.beta = get_number(j, "beta", path);
  b.family = bath_family_from_string(get_string(j, "family", path));
  switch (b.family) {
    case BathFamily::FermionicFlat:
    case BathFamily::BosonicOhmic:
      b.gamma = get_number(j, "gamma", path);
      break;
    case BathFamily::FixedRate:
      b.rate = get_number(j, "rate", path);
      break;
    case BathFamily::Peaked: {
      if (!j.contains("targets") || !j.at("targets").is_array()) {
        fail(path + ".targets", "peaked bath needs a target energy array");
      }
      for (const Json& t : j.at("targets")) b.targets.push_back(t.get<double>());
      if (!j.contains("pair_rates") || !j.at("pair_rates").is_array()) {
        fail(path + ".pair_rates", "peaked bath needs a pair_rates array");
      }
      int k = 0;
      for (const Json& pr : j.at("pair_rates")) {
        const std::string p = path + ".pair_rates." + std::to_string(k++);
        check_keys(pr, {"from", "to", "rate"}, p);
        PeakedPair pp;
        pp.from = get_int(pr, "from", p) - 1;  // config uses 1-based level labels
        pp.to = get_int(pr, "to", p) - 1;
        pp.rate = get_number(pr, "rate", p);
        b.pair_rates.push_back(pp);
      }
      b.match_tol = get_number_or(j, "match_tol", path, 1e-9);
      break;
    }
  }
  return b;
}

Json bath_to_json(const BathModel& b) {
  Json j;
  j["beta"] = b.beta;
  j["family"] = to_string(b.family);
  switch (b.family) {
    case BathFamily::FermionicFlat:
    case BathFamily::BosonicOhmic:
      j["gamma"] = b.gamma;
      break;
    case BathFamily::FixedRate:
      j["rate"] = b.rate;
      break;
    case BathFamily::Peaked: {
      j["targets"] = b.targets;
      Json prs = Json::array();
      for (const auto& p : b.pair_rates) {
        prs.push_back(Json{{"from", p.from + 1}, {"to", p.to + 1}, {"rate", p.rate}});
      }
      j["pair_rates"] = std::move(prs);
      j["match_tol"] = b.match_tol;
      break;
    }
  }
  return j;
}

}  // namespace

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Validate: return "validate";
    case TaskKind::Optimize: return "optimize";
    case TaskKind::SweepPeriod: return "sweep-period";
    case TaskKind::Contour: return "contour";
    case TaskKind::ManyQubit: return "many-qubit";
  }
  return "?";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "validate") return TaskKind::Validate;
  if (s == "optimize") return TaskKind::Optimize;
  if (s == "sweep-period") return TaskKind::SweepPeriod;
  if (s == "contour") return TaskKind::Contour;
  if (s == "many-qubit") return TaskKind::ManyQubit;
  throw InvalidInput("unknown task kind '" + s + "'");
}

ScenarioConfig parse_config(const Json& j) {
  check_keys(j, {"units", "model", "weights", "optimizer", "task"}, "config");
  ScenarioConfig cfg;
  if (j.contains("units")) cfg.units = j.at("units");

  if (!j.contains("model")) fail("config.model", "missing block");
  const Json& jm = j.at("model");
  check_keys(jm, {"dimension", "control_box", "baths"}, "model");
  cfg.model.dimension = get_int(jm, "dimension", "model");
  if (!jm.contains("control_box") || !jm.at("control_box").is_array()) {
    fail("model.control_box", "expected an array of [lo, hi] pairs");
  }
  for (const Json& box : jm.at("control_box")) {
    if (!box.is_array() || box.size() != 2) fail("model.control_box", "each box must be [lo, hi]");
    cfg.model.domain.boxes.emplace_back(box[0].get<double>(), box[1].get<double>());
  }
  if (!jm.contains("baths") || !jm.at("baths").is_array() || jm.at("baths").empty()) {
    fail("model.baths", "expected a non-empty bath array");
  }
  int bi = 0;
  for (const Json& jb : jm.at("baths")) {
    cfg.model.baths.push_back(parse_bath(jb, "model.baths." + std::to_string(bi++)));
  }
  cfg.model.validate();

  if (!j.contains("weights")) fail("config.weights", "missing block");
  const Json& jw = j.at("weights");
  check_keys(jw, {"kind", "c"}, "weights");
  const std::string wk = get_string(jw, "kind", "weights");
  if (wk == "engine") {
    cfg.weights = GapWeights::engine(cfg.model.n_baths());
  } else if (wk == "refrigerator") {
    cfg.weights = GapWeights::refrigerator(cfg.model.baths);
  } else if (wk == "heater") {
    cfg.weights = GapWeights::heater(cfg.model.n_baths());
  } else if (wk == "explicit") {
    if (!jw.contains("c") || !jw.at("c").is_array()) fail("weights.c", "explicit weights need a c array");
    for (const Json& v : jw.at("c")) cfg.weights.c.push_back(v.get<double>());
  } else {
    fail("weights.kind", "expected engine | refrigerator | heater | explicit");
  }
  cfg.weights.validate(cfg.model.n_baths());

  const Json jo = j.contains("optimizer") ? j.at("optimizer") : Json::object();
  check_keys(jo, {"max_legs", "starts", "seed", "ftol", "max_evals", "allow_legs_beyond_dimension"},
             "optimizer");
  cfg.optimizer.max_legs =
      jo.contains("max_legs") ? get_int(jo, "max_legs", "optimizer") : cfg.model.dimension;
  if (jo.contains("starts")) cfg.optimizer.starts = get_int(jo, "starts", "optimizer");
  if (jo.contains("seed")) cfg.optimizer.seed = static_cast<std::uint64_t>(get_number(jo, "seed", "optimizer"));
  cfg.optimizer.ftol = get_number_or(jo, "ftol", "optimizer", 1e-10);
  if (jo.contains("max_evals")) cfg.optimizer.max_evals = get_int(jo, "max_evals", "optimizer");
  if (jo.contains("allow_legs_beyond_dimension")) {
    cfg.optimizer.allow_legs_beyond_dimension = jo.at("allow_legs_beyond_dimension").get<bool>();
  }

  if (!j.contains("task")) fail("config.task", "missing block");
  const Json& jt = j.at("task");
  check_keys(jt, {"kind", "periods", "resolution", "machine", "n"}, "task");
  cfg.task.kind = task_kind_from_string(get_string(jt, "kind", "task"));
  if (jt.contains("periods")) {
    const Json& jp = jt.at("periods");
    if (jp.is_array()) {
      for (const Json& v : jp) cfg.task.periods.values.push_back(v.get<double>());
    } else {
      check_keys(jp, {"min", "max", "count", "spacing"}, "task.periods");
      const double lo = get_number(jp, "min", "task.periods");
      const double hi = get_number(jp, "max", "task.periods");
      const int count = get_int(jp, "count", "task.periods");
      const std::string spacing =
          jp.contains("spacing") ? get_string(jp, "spacing", "task.periods") : "log";
      if (count < 1 || !(lo > 0.0) || !(hi > lo)) fail("task.periods", "need 0 < min < max, count >= 1");
      for (int i = 0; i < count; ++i) {
        const double t = (count == 1) ? 0.0 : static_cast<double>(i) / (count - 1);
        cfg.task.periods.values.push_back(spacing == "log" ? lo * std::pow(hi / lo, t)
                                                           : lo + (hi - lo) * t);
      }
    }
  }
  if (jt.contains("resolution")) cfg.task.resolution = get_int(jt, "resolution", "task");
  if (jt.contains("machine")) cfg.task.machine = get_string(jt, "machine", "task");
  if (jt.contains("n")) {
    for (const Json& v : jt.at("n")) cfg.task.qubits.push_back(v.get<int>());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

Json ScenarioConfig::to_json() const {
  Json j;
  if (!units.is_null()) j["units"] = units;
  Json jm;
  jm["dimension"] = model.dimension;
  Json boxes = Json::array();
  for (const auto& [lo, hi] : model.domain.boxes) boxes.push_back(Json::array({lo, hi}));
  jm["control_box"] = std::move(boxes);
  Json jb = Json::array();
  for (const BathModel& b : model.baths) jb.push_back(bath_to_json(b));
  jm["baths"] = std::move(jb);
  j["model"] = std::move(jm);
  j["weights"] = Json{{"kind", "explicit"}, {"c", weights.c}};
  j["optimizer"] = Json{{"max_legs", optimizer.max_legs},
                        {"starts", optimizer.starts},
                        {"seed", optimizer.seed},
                        {"ftol", optimizer.ftol},
                        {"max_evals", optimizer.max_evals},
                        {"allow_legs_beyond_dimension", optimizer.allow_legs_beyond_dimension}};
  Json jt;
  jt["kind"] = to_string(task.kind);
  if (!task.periods.values.empty()) jt["periods"] = task.periods.values;
  if (task.kind == TaskKind::Contour) jt["resolution"] = task.resolution;
  if (task.kind == TaskKind::ManyQubit) {
    jt["machine"] = task.machine;
    jt["n"] = task.qubits;
  }
  j["task"] = std::move(jt);
  return j;
}

void apply_override(Json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidInput("override must look like path.to.key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  Json value;
  try {
    value = Json::parse(raw);
  } catch (...) {
    value = raw;  // plain string
  }

  Json* cur = &j;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    const bool last = dot == std::string::npos;
    const bool is_index = !key.empty() && key.find_first_not_of("0123456789") == std::string::npos;
    if (is_index) {
      if (!cur->is_array()) throw InvalidInput("override path '" + path + "': '" + key + "' indexes a non-array");
      const std::size_t idx = std::stoul(key);
      if (idx >= cur->size()) throw InvalidInput("override path '" + path + "': index out of range");
      if (last) {
        (*cur)[idx] = value;
        return;
      }
      cur = &(*cur)[idx];
    } else {
      if (!cur->is_object()) throw InvalidInput("override path '" + path + "': '" + key + "' keys a non-object");
      if (last) {
        (*cur)[key] = value;
        return;
      }
      if (!cur->contains(key)) (*cur)[key] = Json::object();
      cur = &(*cur)[key];
    }
    pos = dot + 1;
  }
}

}  // namespace ottoforge
