#include "ordstat/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "ordstat/bounds.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/montecarlo.hpp"
#include "ordstat/partition.hpp"
#include "ordstat/random.hpp"
#include "ordstat/verify.hpp"

namespace ordstat::cli {
namespace {

using nlohmann::ordered_json;

enum class Format { json, csv };

struct Config {
  std::string dist = "gaussian";
  std::string weights_path;
  int k = 1;
  double p = 1.0;
  bool p_given = false;
  long reps = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  Format format = Format::json;
  std::string statistic = "kmin";
  std::string h = "gaussian-n";
  std::vector<std::string> suites{"all"};
  int cases = 10;
  bool closed_form = false;
  bool sort = false;
  std::optional<double> kmax_c;
  std::optional<double> max1_low;
  std::optional<double> max1_high;
};

Distribution parse_distribution(const std::string& spec) {
  if (spec == "gaussian") return Distribution::gaussian();
  if (spec == "symexp") return Distribution::sym_exponential(1.0);
  if (spec.starts_with("symexp:")) {
    const std::string rate = spec.substr(7);
    std::size_t used = 0;
    double r = 0.0;
    try {
      r = std::stod(rate, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rate.size()) throw DomainError("--dist: bad rate in '" + spec + "'");
    return Distribution::sym_exponential(r);
  }
  if (spec.starts_with("table:")) return Distribution::tabulated_csv(std::filesystem::path(spec.substr(6)));
  throw DomainError("--dist: expected gaussian, symexp:<rate> or table:<path>, got '" + spec + "'");
}

Eigen::VectorXd load_weights(const Config& c) {
  if (c.weights_path.empty()) throw DomainError("--weights is required");
  return Weights::read_csv(std::filesystem::path(c.weights_path));
}

Weights ordered_weights(const Config& c, Order order) {
  Eigen::VectorXd v = load_weights(c);
  return c.sort ? Weights::sorted(std::move(v), order) : Weights(std::move(v), order);
}

BoundConstants constants_from(const Config& c, std::vector<std::string>& overrides) {
  BoundConstants k = BoundConstants::defaults();
  if (c.kmax_c) {
    k.kmax_upper_c = *c.kmax_c;
    overrides.push_back("kmax_upper_c");
  }
  if (c.max1_low) {
    k.max1_low = *c.max1_low;
    overrides.push_back("max1_low");
  }
  if (c.max1_high) {
    k.max1_high = *c.max1_high;
    overrides.push_back("max1_high");
  }
  return k;
}

ordered_json to_json(const BoundConstants& k) {
  ordered_json j;
  j["c1"] = k.c1;
  j["c_n"] = k.c_n;
  j["upper_kmin"] = k.upper_kmin;
  j["c0"] = k.c0;
  j["kmax_upper_c"] = k.kmax_upper_c;
  j["max1_low"] = k.max1_low;
  j["max1_high"] = k.max1_high;
  return j;
}

ordered_json to_json(const BoundReport& r) {
  ordered_json j;
  j["kind"] = to_string(r.kind);
  j["k"] = r.k;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["upper_valid"] = r.upper_valid;
  j["argmax"] = r.argmax;
  j["inner_max"] = r.inner_max;
  j["terms"] = r.terms;
  if (r.kind == BoundReport::Kind::kmax) {
    j["k0"] = r.k0;
    j["upper_core"] = r.upper_core;
  }
  if (r.kind == BoundReport::Kind::kmax || r.kind == BoundReport::Kind::max1) j["m_norm"] = r.m_norm;
  j["constants"] = to_json(r.constants);
  j["empirical_constant"] = r.empirical_constant;
  j["notes"] = r.notes;
  return j;
}

std::string csv_value(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Flat key,value rendering of a JSON object; arrays expand to key[i].
void write_kv_csv(const ordered_json& j, std::ostream& out, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      write_kv_csv(*it, out, key);
    } else if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const ordered_json& e = (*it)[i];
        if (e.is_object()) {
          write_kv_csv(e, out, key + "[" + std::to_string(i) + "]");
        } else {
          out << key << "[" << i << "]," << csv_value(e) << '\n';
        }
      }
    } else {
      out << key << ',' << csv_value(*it) << '\n';
    }
  }
}

void emit(const ordered_json& j, Format f, std::ostream& out) {
  if (f == Format::json) {
    out << j.dump(2) << '\n';
  } else {
    out << "key,value\n";
    write_kv_csv(j, out);
  }
}

ordered_json header(const char* command, const Distribution& model, const Config& c) {
  ordered_json j;
  j["command"] = command;
  j["distribution"] = model.describe();
  if (!c.weights_path.empty()) j["weights"] = c.weights_path;
  return j;
}

void merge_into(ordered_json& dst, const ordered_json& src) {
  for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = *it;
}

int cmd_bounds_kmin(const Config& c, std::ostream& out) {
  const Distribution model = parse_distribution(c.dist);
  const Weights x = ordered_weights(c, Order::ascending);
  std::vector<std::string> overrides;
  const BoundConstants k = constants_from(c, overrides);
  BoundReport r;
  if (c.closed_form) {
    if (model.family() != Family::gaussian || model.scale() != 1.0) {
      throw DomainError("--closed-form requires --dist gaussian");
    }
    r = kmin_bounds_gaussian_closed(x, c.k, k);
  } else {
    r = kmin_bounds(x, model, c.k, k);
  }
  ordered_json j = header("bounds-kmin", model, c);
  j["n"] = x.size();
  merge_into(j, to_json(r));
  if (c.p_given) {
    j["p"] = c.p;
    j["moment_lower"] = kmin_moment_lower(x, model, c.k, c.p);
    if (c.k == 1 && model.log_concave()) j["moment_upper"] = min_moment_upper(x, model, c.p);
  }
  j["overrides"] = overrides;
  if (!overrides.empty()) j["empirical_constant"] = true;
  emit(j, c.format, out);
  return 0;
}

int cmd_bounds_kmax(const Config& c, std::ostream& out) {
  const Distribution model = parse_distribution(c.dist);
  const Weights x = ordered_weights(c, Order::descending);
  std::vector<std::string> overrides;
  const BoundReport r = kmax_bounds(x, model, c.k, constants_from(c, overrides));
  ordered_json j = header("bounds-kmax", model, c);
  j["n"] = x.size();
  merge_into(j, to_json(r));
  j["overrides"] = overrides;
  emit(j, c.format, out);
  return 0;
}

int cmd_bounds_max1(const Config& c, std::ostream& out) {
  const Distribution model = parse_distribution(c.dist);
  const Eigen::VectorXd x = load_weights(c);
  std::vector<std::string> overrides;
  const BoundReport r = max1_bounds(x, model, constants_from(c, overrides));
  ordered_json j = header("bounds-max1", model, c);
  j["n"] = x.size();
  merge_into(j, to_json(r));
  j["overrides"] = overrides;
  emit(j, c.format, out);
  return 0;
}

OrliczFunction parse_h(const Config& c, const Distribution& model) {
  if (c.h == "linear") return OrliczFunction::linear();
  if (c.h == "quadratic") return OrliczFunction::power(2.0);
  if (c.h == "gaussian-h") return OrliczFunction::gaussian_h();
  if (c.h == "gaussian-n") return make_N(Distribution::gaussian());
  if (c.h == "n") return make_N(model);
  throw DomainError("--h: expected linear, quadratic, gaussian-h, gaussian-n or n, got '" + c.h + "'");
}

ordered_json to_json(const std::vector<Interval>& blocks) {
  ordered_json a = ordered_json::array();
  for (const Interval& b : blocks) a.push_back({{"first", b.first}, {"last", b.last}});
  return a;
}

int cmd_partition(const Config& c, std::ostream& out) {
  const Distribution model = parse_distribution(c.dist);
  const Weights x = ordered_weights(c, Order::ascending);
  const OrliczFunction H = parse_h(c, model);
  const PartitionResult r = build_partition(x, H, c.k);
  ordered_json j = header("partition", model, c);
  j["n"] = x.size();
  j["k"] = c.k;
  j["h"] = H.describe();
  j["case"] = to_string(r.case_taken);
  j["blocks"] = to_json(r.blocks);
  j["certificate"] = {{"lhs", r.certificate.lhs},
                      {"rhs", r.certificate.rhs},
                      {"factor", r.certificate.factor},
                      {"holds", r.certificate.holds}};
  if (r.case_taken != PartitionCase::case2) {
    j["greedy"] = {{"start", r.greedy_start},
                   {"threshold", r.greedy_threshold},
                   {"blocks", to_json(r.greedy_blocks)}};
  }
  emit(j, c.format, out);
  return 0;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const Distribution model = parse_distribution(c.dist);
  const Eigen::VectorXd x = load_weights(c);
  Statistic s = Statistic::kmin;
  if (c.statistic == "kmax") {
    s = Statistic::kmax;
  } else if (c.statistic == "kmin-power") {
    s = Statistic::kmin_power;
  } else if (c.statistic != "kmin") {
    throw DomainError("--statistic: expected kmin, kmax or kmin-power, got '" + c.statistic + "'");
  }
  const SimulationOptions opts{c.reps, c.seed, c.threads};
  const MonteCarloEstimate e = estimate_order_stat(x, model, c.k, s, opts, c.p);
  ordered_json j = header("simulate", model, c);
  j["n"] = x.size();
  j["statistic"] = to_string(e.statistic);
  j["k"] = e.k;
  j["p"] = e.p;
  j["mean"] = e.mean;
  j["ci_halfwidth"] = e.ci_halfwidth;
  j["ci_level"] = 0.99;
  j["std_error"] = e.std_error;
  j["replications"] = e.replications;
  j["seed"] = e.seed;
  emit(j, c.format, out);
  return 0;
}

int cmd_verify(const Config& c, std::ostream& out) {
  const Distribution model = parse_distribution(c.dist);
  std::vector<std::string> selected;
  for (const std::string& s : c.suites) {
    if (s == "all") {
      selected = suite_names();
      break;
    }
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw DomainError("--suite: unknown suite '" + s + "'");
    }
  }
  if (selected.empty()) {
    // registry order, whatever order the flags came in
    for (const std::string& s : suite_names()) {
      if (std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end()) selected.push_back(s);
    }
  }
  const SuiteOptions opts{c.cases, c.reps, c.seed, c.threads};
  std::vector<CheckRow> rows;
  for (const std::string& s : selected) {
    std::vector<CheckRow> r = run_suite(s, model, opts);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const bool all_pass = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });

  if (c.format == Format::json) {
    ordered_json j = header("verify", model, c);
    j["seed"] = c.seed;
    j["replications"] = c.reps;
    j["cases"] = c.cases;
    j["suites"] = selected;
    ordered_json arr = ordered_json::array();
    for (const CheckRow& r : rows) {
      arr.push_back({{"suite", r.suite},
                     {"case", r.index},
                     {"instance", r.instance},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"pass", r.pass}});
    }
    j["checks"] = std::move(arr);
    j["all_pass"] = all_pass;
    out << j.dump(2) << '\n';
  } else {
    out << "suite,case,instance,lhs,rhs,pass\n";
    for (const CheckRow& r : rows) {
      out << r.suite << ',' << r.index << ",\"" << r.instance << "\"," << ordered_json(r.lhs).dump() << ','
          << ordered_json(r.rhs).dump() << ',' << (r.pass ? "pass" : "FAIL") << '\n';
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orlicz norms and order-statistic bounds", "ordstat"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;

  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};
  app.add_option("--format", c.format, "Output format: json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--dist", c.dist, "gaussian, symexp:<rate> or table:<path>");
  app.add_option("--threads", c.threads, "Worker threads (default: ORDSTAT_THREADS or all cores)");

  auto add_weights = [&](CLI::App* s) {
    s->add_option("--weights", c.weights_path, "Weights CSV, one positive number per line")->required();
    s->add_flag("--sort", c.sort, "Sort the weights instead of requiring the command's order");
  };
  auto add_k = [&](CLI::App* s) { s->add_option("--k", c.k, "Order statistic index")->required(); };

  CLI::App* kmin = app.add_subcommand("bounds-kmin", "Two-sided bounds for E k-min |x_i xi_i|");
  add_weights(kmin);
  add_k(kmin);
  kmin->add_flag("--closed-form", c.closed_form, "Gaussian closed-form variant");
  kmin->add_option("--p", c.p, "Also report moment bounds for exponent p")->check(CLI::PositiveNumber);

  CLI::App* kmax = app.add_subcommand("bounds-kmax", "Two-sided bounds for E k-max |x_i xi_i|");
  add_weights(kmax);
  add_k(kmax);
  kmax->add_option("--kmax-c", c.kmax_c, "Override the k-max upper constant")->check(CLI::PositiveNumber);

  CLI::App* max1 = app.add_subcommand("bounds-max1", "Two-sided bounds for E max |x_i xi_i|");
  add_weights(max1);
  max1->add_option("--max1-low", c.max1_low, "Override the lower constant")->check(CLI::PositiveNumber);
  max1->add_option("--max1-high", c.max1_high, "Override the upper constant")->check(CLI::PositiveNumber);

  CLI::App* part = app.add_subcommand("partition", "Block partition with its certificate");
  part->set_help_flag("--help", "Print this help message and exit");
  add_weights(part);
  add_k(part);
  part->add_option("--h", c.h, "linear, quadratic, gaussian-h, gaussian-n or n (from --dist)");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimate of an order statistic");
  add_weights(sim);
  add_k(sim);
  sim->add_option("--statistic", c.statistic, "kmin, kmax or kmin-power");
  sim->add_option("--p", c.p, "Exponent for kmin-power")->check(CLI::PositiveNumber);

  CLI::App* ver = app.add_subcommand("verify", "Run the inequality checkers");
  ver->add_option("--suite", c.suites, "Suite name or all (repeatable)");
  ver->add_option("--cases", c.cases, "Random configurations per suite")->check(CLI::NonNegativeNumber);

  for (CLI::App* s : {sim, ver}) {
    s->add_option("--reps", c.reps, "Replications")->check(CLI::Range(2L, 1L << 40));
    s->add_option("--seed", c.seed, "Base seed");
  }

  std::vector<const char*> argv{"ordstat"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  for (CLI::App* s : {kmin, sim}) {
    if (s->count("--p") > 0) c.p_given = true;
  }

  try {
    if (*kmin) return cmd_bounds_kmin(c, out);
    if (*kmax) return cmd_bounds_kmax(c, out);
    if (*max1) return cmd_bounds_max1(c, out);
    if (*part) return cmd_partition(c, out);
    if (*sim) return cmd_simulate(c, out);
    return cmd_verify(c, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 1;
  } catch (const std::system_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ordstat::cli
