#include "permmoments/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>

#include <json.hpp>

#include "permmoments/closed_form.hpp"
#include "permmoments/induction.hpp"
#include "permmoments/oracle.hpp"

namespace pm::cli {

using nlohmann::json;

namespace {

template <typename Scalar>
Dataset<Scalar> load(const RunConfig& cfg) {
  if (cfg.input.empty() || cfg.input == "-") return read_csv<Scalar>(std::cin, cfg.csv);
  return read_csv_file<Scalar>(cfg.input, cfg.csv);
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ZeroVariance& e) {
    err << "error: " << e.what() << '\n';
    return kExitZeroVariance;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
}

void check_order(const RunConfig& cfg) {
  if (cfg.k_max < 1) throw std::invalid_argument("--k-max must be >= 1");
  if (cfg.k_max > kVerifiedOrderLimit && !cfg.allow_high_order)
    throw std::invalid_argument("orders above " + std::to_string(kVerifiedOrderLimit) +
                                " are recursion-only; pass --allow-high-order to request them");
}

void check_format(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv")
    throw std::invalid_argument("unknown --format '" + cfg.format + "'");
}

template <typename Scalar>
void require_variance(const Dataset<Scalar>& d) {
  const CenteredData<Scalar> c = center(d, false);
  if (c.var_x == 0) throw ZeroVariance("x column has zero variance");
  if (c.var_y == 0) throw ZeroVariance("y column has zero variance");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json header(const char* command) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}};
}

void emit_moments_csv(std::ostream& out, const json& report) {
  const bool sampled = report["method"] == "monte-carlo";
  out << "k,value,method" << (sampled ? ",standard_error" : "") << '\n';
  for (const auto& row : report["results"]) {
    out << row["k"].get<int>() << ',' << row["value"].dump() << ','
        << row["method"].get<std::string>();
    if (sampled) out << ',' << row["standard_error"].dump();
    out << '\n';
  }
}

json moments_exact_report(const RunConfig& cfg, const Dataset<Rational>& d) {
  json results = json::array();
  if (cfg.method == "auto" || cfg.method == "induction") {
    for (const ExactMoment& m : moments_exact(d, cfg.k_max)) {
      json row{{"k", m.k}, {"value", m.value()}, {"method", "induction"}};
      if (auto v = m.exact_value()) row["exact_value"] = v->str();
      results.push_back(row);
    }
  } else if (cfg.method == "brute-force") {
    const auto numerators = brute_force_numerators_exact(d, cfg.k_max, cfg.threads);
    const CenteredData<Rational> c = center(d, false);
    const Rational n(static_cast<long long>(d.size()));
    const Rational d2 = (c.var_x * n) * (c.var_y * n);
    for (int k = 1; k <= cfg.k_max; ++k) {
      const ExactMoment m{k, numerators[std::size_t(k)], d2};
      json row{{"k", k}, {"value", m.value()}, {"method", "brute-force"}};
      if (auto v = m.exact_value()) row["exact_value"] = v->str();
      results.push_back(row);
    }
  } else {
    throw std::invalid_argument("--exact-arith supports the induction and brute-force methods only");
  }
  return results;
}

json moments_float_report(const RunConfig& cfg, const Dataset<double>& d) {
  json results = json::array();
  const std::string& method = cfg.method;
  if (method == "auto" || method == "induction") {
    InductionSession session(d, cfg.k_max);
    const ClosedFormInputs inputs = ClosedFormInputs::from_dataset(d);
    for (int k = 1; k <= cfg.k_max; ++k) {
      if (method == "auto" && k <= kVerifiedOrderLimit)
        results.push_back({{"k", k}, {"value", moment_closed_form(inputs, k)}, {"method", "closed-form"}});
      else
        results.push_back({{"k", k}, {"value", session.moment(k).value}, {"method", "induction"}});
    }
  } else if (method == "closed-form") {
    if (cfg.k_max > kVerifiedOrderLimit)
      throw UnsupportedOrder("closed forms exist for k = 1..5 only");
    const ClosedFormInputs inputs = ClosedFormInputs::from_dataset(d);
    for (int k = 1; k <= cfg.k_max; ++k)
      results.push_back({{"k", k}, {"value", moment_closed_form(inputs, k)}, {"method", method}});
  } else if (method == "brute-force") {
    const PermutationStats s = brute_force_moments(d, cfg.k_max, cfg.threads);
    for (int k = 1; k <= cfg.k_max; ++k)
      results.push_back({{"k", k}, {"value", s.moments[std::size_t(k)]}, {"method", method}});
  } else if (method == "monte-carlo") {
    const PermutationStats s =
        monte_carlo_moments(d, cfg.k_max, cfg.samples.value_or(kDefaultSamples), cfg.seed, cfg.threads);
    for (int k = 1; k <= cfg.k_max; ++k)
      results.push_back({{"k", k},
                         {"value", s.moments[std::size_t(k)]},
                         {"method", method},
                         {"standard_error", s.standard_errors[std::size_t(k)]}});
  } else {
    throw std::invalid_argument("unknown --method '" + method + "'");
  }
  return results;
}

}  // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("PERM_MOMENTS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return unsigned(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_order(cfg);
    check_format(cfg);
    const auto start = std::chrono::steady_clock::now();
    json report = header("moments");
    report["method"] = cfg.method;
    report["precision"] = cfg.exact ? "exact" : "float";
    report["k_max"] = cfg.k_max;
    if (cfg.exact) {
      const Dataset<Rational> d = load<Rational>(cfg);
      require_variance(d);
      const CenteredData<Rational> c = center(d, false);
      report["n"] = d.size();
      report["sigma_x"] = c.sigma_x();
      report["sigma_y"] = c.sigma_y();
      report["results"] = moments_exact_report(cfg, d);
    } else {
      const Dataset<double> d = load<double>(cfg);
      require_variance(d);
      const CenteredData<double> c = center(d, false);
      report["n"] = d.size();
      report["sigma_x"] = c.sigma_x();
      report["sigma_y"] = c.sigma_y();
      report["results"] = moments_float_report(cfg, d);
    }
    report["elapsed_seconds"] = seconds_since(start);
    if (cfg.format == "csv")
      emit_moments_csv(out, report);
    else
      out << report.dump(2) << '\n';
    return int(kExitOk);
  });
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(cfg);
    if (cfg.exact) throw std::invalid_argument("--exact-arith is not supported by validate");
    ValidationConfig vc;
    vc.trials = cfg.trials;
    vc.n_set = cfg.n_set;
    vc.k_max = cfg.k_max;
    vc.seed = cfg.seed;
    vc.generator = parse_generator(cfg.generator);
    vc.threads = cfg.threads;
    const double bound = cfg.tolerance.value_or(kDefaultValidationBound);
    const ValidationReport rep = run_validation(vc);

    json report = header("validate");
    report["trials"] = vc.trials;
    report["n_set"] = vc.n_set;
    report["k_max"] = vc.k_max;
    report["seed"] = vc.seed;
    report["generator"] = to_string(vc.generator);
    report["bound"] = bound;
    json cells = json::array(), failing = json::array();
    for (const ValidationCell& c : rep.cells) {
      const bool ok = c.mse <= bound;
      json cell{{"n", c.n}, {"k", c.k}, {"mse", c.mse}, {"max_abs_error", c.max_abs_error}, {"passed", ok}};
      if (!ok) failing.push_back(cell);
      cells.push_back(std::move(cell));
    }
    report["cells"] = cells;
    report["failing"] = failing;
    report["passed"] = failing.empty();

    if (cfg.format == "csv") {
      out << "n,k,mse,max_abs_error,passed\n";
      for (const auto& c : cells)
        out << c["n"].get<int>() << ',' << c["k"].get<int>() << ',' << c["mse"].dump() << ','
            << c["max_abs_error"].dump() << ',' << (c["passed"].get<bool>() ? "true" : "false") << '\n';
    } else {
      out << report.dump(2) << '\n';
    }
    for (const auto& c : failing)
      err << "cell n=" << c["n"].get<int>() << " k=" << c["k"].get<int>() << " mse=" << c["mse"].dump()
          << " exceeds bound " << bound << '\n';
    return int(failing.empty() ? kExitOk : kExitCheckFailed);
  });
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_order(cfg);
    check_format(cfg);
    if (cfg.exact) throw std::invalid_argument("--exact-arith is not supported by compare");
    const Dataset<double> d = load<double>(cfg);
    require_variance(d);
    const double tol = cfg.tolerance.value_or(kDefaultAnalyticTolerance);
    const std::uint64_t samples = cfg.samples.value_or(kDefaultSamples);

    json methods = json::object();
    InductionSession session(d, cfg.k_max);
    const ClosedFormInputs inputs = ClosedFormInputs::from_dataset(d);
    methods["induction"] = "ok";
    methods["closed-form"] =
        cfg.k_max <= kVerifiedOrderLimit ? "ok" : "partial: orders above 5 skipped";
    std::optional<PermutationStats> brute;
    if (d.size() <= kDefaultBruteForceCap) {
      brute = brute_force_moments(d, cfg.k_max, cfg.threads);
      methods["brute-force"] = "ok";
    } else {
      methods["brute-force"] = "skipped: n = " + std::to_string(d.size()) + " exceeds " +
                               std::to_string(kDefaultBruteForceCap);
    }
    const PermutationStats mc = monte_carlo_moments(d, cfg.k_max, samples, cfg.seed, cfg.threads);
    methods["monte-carlo"] = "ok";

    bool all_ok = true;
    json rows = json::array();
    for (int k = 1; k <= cfg.k_max; ++k) {
      std::map<std::string, double> values;
      values["induction"] = session.moment(k).value;
      if (k <= kVerifiedOrderLimit) values["closed-form"] = moment_closed_form(inputs, k);
      if (brute) values["brute-force"] = brute->moments[std::size_t(k)];
      values["monte-carlo"] = mc.moments[std::size_t(k)];
      const double se = mc.standard_errors[std::size_t(k)];

      json diffs = json::array();
      for (auto a = values.begin(); a != values.end(); ++a) {
        for (auto b = std::next(a); b != values.end(); ++b) {
          const bool sampled = a->first == "monte-carlo" || b->first == "monte-carlo";
          const double limit = sampled ? std::max(kSampledSigmas * se, tol) : tol;
          const double diff = std::abs(a->second - b->second);
          const bool agree = diff <= limit;
          all_ok = all_ok && agree;
          diffs.push_back({{"a", a->first}, {"b", b->first}, {"abs_diff", diff}, {"limit", limit}, {"agree", agree}});
        }
      }
      json vals = json::object();
      for (const auto& [name, v] : values) vals[name] = v;
      rows.push_back({{"k", k}, {"values", vals}, {"monte_carlo_standard_error", se}, {"diffs", diffs}});
    }

    json report = header("compare");
    report["n"] = d.size();
    report["k_max"] = cfg.k_max;
    report["samples"] = samples;
    report["seed"] = cfg.seed;
    report["tolerance"] = {{"analytic", tol}, {"sampled_sigmas", kSampledSigmas}};
    report["methods"] = methods;
    report["rows"] = rows;
    report["passed"] = all_ok;

    if (cfg.format == "csv") {
      out << "k,method_a,method_b,value_a,value_b,abs_diff,limit,agree\n";
      for (const auto& row : rows)
        for (const auto& df : row["diffs"]) {
          const std::string a = df["a"], b = df["b"];
          out << row["k"].get<int>() << ',' << a << ',' << b << ',' << row["values"][a].dump() << ','
              << row["values"][b].dump() << ',' << df["abs_diff"].dump() << ',' << df["limit"].dump()
              << ',' << (df["agree"].get<bool>() ? "true" : "false") << '\n';
        }
    } else {
      out << report.dump(2) << '\n';
    }
    if (!all_ok) err << "methods disagree beyond tolerance\n";
    return int(all_ok ? kExitOk : kExitCheckFailed);
  });
}

int cmd_pvalue(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(cfg);
    if (cfg.exact) throw std::invalid_argument("--exact-arith is not supported by pvalue");
    const Dataset<double> d = load<double>(cfg);
    require_variance(d);

    std::optional<std::uint64_t> samples;
    if (cfg.method == "brute-force") {
      samples = std::nullopt;
    } else if (cfg.method == "monte-carlo") {
      samples = cfg.samples.value_or(kDefaultSamples);
    } else if (cfg.method == "auto") {
      if (cfg.samples || d.size() > 8) samples = cfg.samples.value_or(kDefaultSamples);
    } else {
      throw std::invalid_argument("pvalue supports --method auto, brute-force or monte-carlo");
    }
    const PValueResult r = permutation_pvalue(d, samples, cfg.seed, cfg.threads);

    json report = header("pvalue");
    report["n"] = d.size();
    report["r_observed"] = r.r_observed;
    report["backend"] = r.exact ? "exact" : "sampled";
    report["count"] = r.count;
    report["extreme"] = r.extreme;
    report["p_value"] = r.p_value;
    if (!r.exact) report["seed"] = cfg.seed;

    if (cfg.format == "csv") {
      out << "n,r_observed,backend,count,extreme,p_value\n"
          << d.size() << ',' << report["r_observed"].dump() << ',' << report["backend"].get<std::string>()
          << ',' << r.count << ',' << r.extreme << ',' << report["p_value"].dump() << '\n';
    } else {
      out << report.dump(2) << '\n';
    }
    return int(kExitOk);
  });
}

}  // namespace pm::cli
