#include "tropweight/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tropweight {
namespace {

[[noreturn]] void bad_spec(const std::string& what) {
  throw std::invalid_argument("weight spec: " + what);
}

}  // namespace

WeightSpec weight_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    bad_spec("expected an object with a \"family\" string");
  const std::string family = j["family"].get<std::string>();
  WeightSpec spec;
  if (family == "monomial") {
    if (!j.contains("m")) bad_spec("monomial requires \"m\"");
    spec.family = MonomialFamily{j["m"].get<std::int64_t>()};
  } else if (family == "exp_power") {
    if (!j.contains("beta")) bad_spec("exp_power requires \"beta\"");
    spec.family = ExpPowerFamily{j["beta"].get<double>()};
  } else if (family == "log_power") {
    if (!j.contains("alpha")) bad_spec("log_power requires \"alpha\"");
    spec.family = LogPowerFamily{j["alpha"].get<double>()};
  } else if (family == "tropical") {
    if (!j.contains("terms")) bad_spec("tropical requires \"terms\"");
    spec.family = TropicalFamily{series_from_json(j)};
  } else if (family == "table") {
    if (!j.contains("samples") || !j["samples"].is_array())
      bad_spec("table requires a \"samples\" array");
    TableFamily fam;
    for (const auto& row : j["samples"]) {
      if (!row.is_array() || row.size() != 2)
        bad_spec("table samples must be [x, phi] pairs");
      fam.samples.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    spec.family = std::move(fam);
  } else {
    bad_spec("unknown family \"" + family + "\"");
  }
  return spec;
}

json weight_spec_to_json(const WeightSpec& spec) {
  json j;
  std::visit(
      [&j](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, MonomialFamily>) {
          j["family"] = "monomial";
          j["m"] = fam.m;
        } else if constexpr (std::is_same_v<T, ExpPowerFamily>) {
          j["family"] = "exp_power";
          j["beta"] = fam.beta;
        } else if constexpr (std::is_same_v<T, LogPowerFamily>) {
          j["family"] = "log_power";
          j["alpha"] = fam.alpha;
        } else if constexpr (std::is_same_v<T, TropicalFamily>) {
          j["family"] = "tropical";
          j["terms"] = series_to_json(fam.terms)["terms"];
        } else {
          j["family"] = "table";
          json rows = json::array();
          for (const auto& [x, y] : fam.samples) rows.push_back({x, y});
          j["samples"] = std::move(rows);
        }
      },
      spec.family);
  return j;
}

WeightSpec parse_weight_argument(const std::string& arg) {
  namespace fs = std::filesystem;
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
    if (!fs::exists(arg)) bad_spec("file not found: " + arg);
    std::ifstream in(arg);
    json j;
    in >> j;
    return weight_spec_from_json(j);
  }
  const auto colon = arg.find(':');
  const std::string family = arg.substr(0, colon);
  json j;
  j["family"] = family;
  if (colon != std::string::npos) {
    std::stringstream rest(arg.substr(colon + 1));
    std::string kv;
    while (std::getline(rest, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        bad_spec("expected key=value in \"" + kv + "\"");
      const std::string key = kv.substr(0, eq);
      const std::string val = kv.substr(eq + 1);
      try {
        if (key == "m") {
          j[key] = std::stoll(val);
        } else {
          j[key] = std::stod(val);
        }
      } catch (const std::exception&) {
        bad_spec("could not parse value \"" + val + "\" for " + key);
      }
    }
  }
  return weight_spec_from_json(j);
}

json series_to_json(const TropicalSeries& T) {
  const auto n = T.size();
  if (!n)
    throw std::invalid_argument(
        "series_to_json: only fully resolved series can be serialized");
  json terms = json::array();
  for (const TropicalTerm& t : T.prefix(*n)) {
    terms.push_back({{"slope", t.slope}, {"intercept", t.intercept}});
  }
  json j;
  j["terms"] = std::move(terms);
  return j;
}

TropicalSeries series_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array() ||
      j["terms"].empty())
    throw std::invalid_argument("tropical series: expected a nonempty \"terms\" array");
  std::vector<TropicalTerm> terms;
  for (const auto& t : j["terms"]) {
    terms.push_back(TropicalTerm{t.at("slope").get<std::int64_t>(),
                                 t.at("intercept").get<double>()});
  }
  return essential_filter(terms);
}

json chain_to_json(const ThinnedChain& chain) {
  json terms = json::array();
  for (const TropicalTerm& t : chain.selected)
    terms.push_back({{"slope", t.slope}, {"intercept", t.intercept}});
  json bps = json::array();
  for (std::size_t k = 1; k < chain.breakpoints_x.size(); ++k)
    bps.push_back(chain.breakpoints_x[k]);
  json j;
  j["h"] = chain.h;
  j["terms"] = std::move(terms);
  j["breakpoints"] = std::move(bps);
  return j;
}

json log_power_series_to_json(const LogPowerSeries& s) {
  json entries = json::array();
  for (const auto& e : s.entries)
    entries.push_back(
        {{"exponent", e.exponent}, {"log_coefficient", e.log_coeff}});
  json j;
  j["entries"] = std::move(entries);
  j["truncation_index"] = s.truncation_index;
  j["tail_complete"] = s.tail_complete;
  return j;
}

LogPowerSeries log_power_series_from_json(const json& j) {
  LogPowerSeries s;
  for (const auto& e : j.at("entries")) {
    s.entries.push_back(LogPowerEntry{e.at("exponent").get<std::int64_t>(),
                                      e.at("log_coefficient").get<double>()});
  }
  s.truncation_index = j.value("truncation_index", std::size_t{0});
  s.tail_complete = j.value("tail_complete", false);
  return s;
}

json classification_to_json(const ClassificationReport& rep) {
  json gaps = json::array();
  for (const auto& r : rep.gaps) {
    gaps.push_back(
        {{"n", r.n}, {"a_n", r.a_n}, {"d_n", r.d_n}, {"h_n", r.h_n}});
  }
  json j;
  j["verdict"] = to_string(rep.verdict);
  j["rapid"] = rep.rapid;
  j["rapid_probe"] = {{"slope_threshold", rep.probe_slope_threshold},
                      {"x_max", rep.probe_x_max},
                      {"dphi_at_x_max", rep.dphi_at_probe}};
  j["gaps"] = std::move(gaps);
  j["omitted_slopes"] = rep.omitted_slopes;
  j["sup_gap"] = rep.sup_gap;
  j["tail_gap_bound"] = rep.tail_gap_bound;
  j["ratio_evidence"] = rep.ratio_evidence;
  j["caveat"] = rep.caveat;
  return j;
}

json check_entries_to_json(const std::vector<CheckEntry>& entries) {
  json arr = json::array();
  for (const auto& e : entries) {
    arr.push_back({{"k", e.k},
                   {"x", e.x},
                   {"lhs", e.lhs},
                   {"rhs", e.rhs},
                   {"slack", e.slack}});
  }
  return arr;
}

json separation_to_json(const SeparationReport& rep) {
  json j;
  j["passed"] = rep.passed;
  j["endpoint_certificates"] = check_entries_to_json(rep.endpoint_certificates);
  j["violations"] = check_entries_to_json(rep.violations);
  return j;
}

json chain_bounds_to_json(const ChainBoundsReport& rep) {
  json j;
  j["passed"] = rep.passed;
  j["worst_slack"] = {{"i", rep.worst_slack_i},
                      {"ii", rep.worst_slack_ii},
                      {"iii", rep.worst_slack_iii}};
  j["max_phi_minus_chain"] = rep.max_phi_minus_chain;
  j["violations"] = check_entries_to_json(rep.violations);
  return j;
}

json certificate_to_json(const EquivalenceCertificate& cert) {
  json violations = json::array();
  for (const auto& v : cert.violations) {
    violations.push_back({{"log_t", v.log_t},
                          {"theta", v.theta},
                          {"log_sum", v.log_sum},
                          {"phi", v.phi},
                          {"slack_low", v.slack_low},
                          {"slack_high", v.slack_high}});
  }
  json j;
  j["h"] = cert.h;
  j["c_low"] = cert.c_low;
  j["c_high"] = cert.c_high;
  j["paper_bounds"] = {{"low", cert.paper_low}, {"high", cert.paper_high}};
  j["tolerance"] = cert.tolerance;
  j["points_checked"] = cert.points_checked;
  j["passed"] = cert.passed;
  j["violations"] = std::move(violations);
  return j;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace tropweight
