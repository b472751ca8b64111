#ifndef TROPWEIGHT_JSON_IO_HPP
#define TROPWEIGHT_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "tropweight/holomap.hpp"
#include "tropweight/series.hpp"
#include "tropweight/thinning.hpp"
#include "tropweight/tropical.hpp"
#include "tropweight/weights.hpp"

namespace tropweight {

using json = nlohmann::ordered_json;

/// {"family":"log_power","alpha":2.0} and friends.
WeightSpec weight_spec_from_json(const json& j);
json weight_spec_to_json(const WeightSpec& spec);

/// CLI shorthand "family:key=value,..." (e.g. "log_power:alpha=2.5") or a
/// path to a JSON spec file.
WeightSpec parse_weight_argument(const std::string& arg);

/// {"terms":[{"slope":..,"intercept":..},...]}; finite series only.
json series_to_json(const TropicalSeries& T);
TropicalSeries series_from_json(const json& j);

/// {"h":..,"terms":[...],"breakpoints":[...]}; the -inf sentinel is
/// implicit (breakpoints lists the finite crossings only).
json chain_to_json(const ThinnedChain& chain);

/// {"entries":[{"exponent":..,"log_coefficient":..},...],...}
json log_power_series_to_json(const LogPowerSeries& s);
LogPowerSeries log_power_series_from_json(const json& j);

json classification_to_json(const ClassificationReport& rep);
json check_entries_to_json(const std::vector<CheckEntry>& entries);
json separation_to_json(const SeparationReport& rep);
json chain_bounds_to_json(const ChainBoundsReport& rep);
json certificate_to_json(const EquivalenceCertificate& cert);

/// Fixed 17-significant-digit formatting used by the CSV emitters.
std::string format_g17(double v);

}  // namespace tropweight

#endif
