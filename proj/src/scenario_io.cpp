#include "caas/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "caas/error.hpp"

namespace caas {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads typed fields out of one JSON object, tracking which keys were used.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_.empty() ? "<root>" : where_, "expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(join(where_, key), "wrong type, got " + std::string(it->type_name()));
    }
  }

  void get_number(const char* key, double& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_number()) throw ConfigError(join(where_, key), "expected a number, got " + std::string(it->type_name()));
    out = it->get<double>();
  }

  template <class Int>
  void get_integer(const char* key, Int& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_number_integer()) throw ConfigError(join(where_, key), "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (it->is_number_unsigned()) {
        out = it->get<Int>();
        return;
      }
      if (it->get<std::int64_t>() < 0) throw ConfigError(join(where_, key), "must be non-negative");
    }
    out = it->get<Int>();
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(join(where_, it.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_controller_fields(Fields& f, ControllerConfig& cfg) {
  f.get_number("alpha", cfg.alpha);
  f.get_number("beta", cfg.beta);
  f.get_integer("n_min", cfg.n_min);
  f.get_integer("n_max", cfg.n_max);
  f.get_integer("history_len", cfg.history_len);
  f.get_number("as_utilization_threshold", cfg.as_utilization_threshold);
  f.get_integer("as_step", cfg.as_step);
  f.get_number("as_interval", cfg.as_interval);
}

}  // namespace

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("parse error"); pos != std::string::npos) what = what.substr(pos);
    throw ParseError(source, line, column, what);
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing " + path.string());
}

json controller_to_json(ControllerKind kind, const ControllerConfig& cfg) {
  return json{{"variant", to_string(kind)},
              {"alpha", cfg.alpha},
              {"beta", cfg.beta},
              {"n_min", cfg.n_min},
              {"n_max", cfg.n_max},
              {"history_len", cfg.history_len},
              {"as_utilization_threshold", cfg.as_utilization_threshold},
              {"as_step", cfg.as_step},
              {"as_interval", cfg.as_interval}};
}

void controller_from_json(const json& j, ControllerKind& kind, ControllerConfig& cfg) {
  if (j.is_string()) {
    kind = controller_kind_from_string(j.get<std::string>());
    return;
  }
  Fields f(j, "controller");
  std::string variant(to_string(kind));
  f.get("variant", variant);
  kind = controller_kind_from_string(variant);
  read_controller_fields(f, cfg);
  f.finish();
}

json estimator_to_json(const EstimatorConfig& cfg) {
  return json{{"variant", to_string(cfg.kind)},     {"sigma_z_sq", cfg.sigma_z_sq}, {"sigma_v_sq", cfg.sigma_v_sq},
              {"adhoc_gain", cfg.adhoc_gain},       {"arma_delta", cfg.arma_delta}, {"arma_gamma", cfg.arma_gamma},
              {"window", cfg.window},               {"threshold", cfg.threshold}};
}

EstimatorConfig estimator_from_json(const json& j, EstimatorConfig cfg) {
  if (j.is_string()) {
    cfg.kind = estimator_kind_from_string(j.get<std::string>());
    return cfg;
  }
  Fields f(j, "estimator");
  std::string variant(to_string(cfg.kind));
  f.get("variant", variant);
  cfg.kind = estimator_kind_from_string(variant);
  f.get_number("sigma_z_sq", cfg.sigma_z_sq);
  f.get_number("sigma_v_sq", cfg.sigma_v_sq);
  f.get_number("adhoc_gain", cfg.adhoc_gain);
  f.get_number("arma_delta", cfg.arma_delta);
  f.get_number("arma_gamma", cfg.arma_gamma);
  f.get_integer("window", cfg.window);
  f.get_number("threshold", cfg.threshold);
  f.finish();
  return cfg;
}

json scenario_to_json(const Scenario& s) {
  json workloads = json::array();
  for (const auto& w : s.workloads) {
    json types = json::array();
    for (const auto& t : w.types) {
      types.push_back({{"data_type", t.data_type.value},
                       {"items", t.items},
                       {"mean_cus", t.truth.mean_cus},
                       {"task_cv", t.truth.task_cv},
                       {"drift_variance", t.truth.drift_variance}});
    }
    workloads.push_back({{"id", w.id.value},
                         {"class", w.workload_class},
                         {"arrival_time", w.arrival_time},
                         {"requested_ttc", w.requested_ttc},
                         {"types", std::move(types)}});
  }
  json j{{"schema", kScenarioSchema},
         {"monitoring_interval", s.monitoring_interval},
         {"instance_startup_delay", s.instance_startup_delay},
         {"billing_quantum", s.billing_quantum},
         {"unit_price", s.unit_price},
         {"measurement_variance", s.measurement_variance},
         {"per_workload_cap", s.per_workload_cap},
         {"bootstrap_rate", s.bootstrap_rate},
         {"work_conserving", s.work_conserving},
         {"rng_seed", s.rng_seed},
         {"controller", controller_to_json(s.controller_kind, s.controller)},
         {"estimator", estimator_to_json(s.estimator)},
         {"workloads", std::move(workloads)}};
  if (s.horizon) j["horizon"] = *s.horizon;
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  Fields f(j, "");
  std::string schema(kScenarioSchema);
  f.get("schema", schema);
  if (schema != kScenarioSchema) throw ConfigError("schema", "expected '" + std::string(kScenarioSchema) + "', got '" + schema + "'");
  f.get_number("monitoring_interval", s.monitoring_interval);
  f.get_number("instance_startup_delay", s.instance_startup_delay);
  f.get_number("billing_quantum", s.billing_quantum);
  f.get_number("unit_price", s.unit_price);
  f.get_number("measurement_variance", s.measurement_variance);
  f.get_number("per_workload_cap", s.per_workload_cap);
  f.get_number("bootstrap_rate", s.bootstrap_rate);
  f.get("work_conserving", s.work_conserving);
  f.get_integer("rng_seed", s.rng_seed);
  if (const json* h = f.child("horizon"); h && !h->is_null()) {
    if (!h->is_number()) throw ConfigError("horizon", "expected a number");
    s.horizon = h->get<double>();
  }
  if (const json* c = f.child("controller")) controller_from_json(*c, s.controller_kind, s.controller);
  if (const json* e = f.child("estimator")) s.estimator = estimator_from_json(*e);
  if (const json* ws = f.child("workloads")) {
    if (!ws->is_array()) throw ConfigError("workloads", "expected an array");
    for (std::size_t i = 0; i < ws->size(); ++i) {
      const std::string where = "workloads[" + std::to_string(i) + "]";
      Fields wf((*ws)[i], where);
      WorkloadSpec w;
      wf.get("id", w.id.value);
      wf.get("class", w.workload_class);
      wf.get_number("arrival_time", w.arrival_time);
      wf.get_number("requested_ttc", w.requested_ttc);
      const json* ts = wf.child("types");
      if (!ts || !ts->is_array()) throw ConfigError(where + ".types", "expected an array");
      for (std::size_t k = 0; k < ts->size(); ++k) {
        Fields tf((*ts)[k], where + ".types[" + std::to_string(k) + "]");
        TypeSpec t;
        tf.get("data_type", t.data_type.value);
        tf.get_integer("items", t.items);
        tf.get_number("mean_cus", t.truth.mean_cus);
        tf.get_number("task_cv", t.truth.task_cv);
        tf.get_number("drift_variance", t.truth.drift_variance);
        tf.finish();
        w.types.push_back(std::move(t));
      }
      wf.finish();
      s.workloads.push_back(std::move(w));
    }
  }
  f.finish();
  s.validate();
  return s;
}

std::string dump_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void save_scenario(const std::filesystem::path& path, const Scenario& s) { write_text_file(path, dump_scenario(s)); }

}  // namespace caas
