#pragma once

// JSON and CSV forms of the library's artifacts. Doubles are written with
// round-trip precision, so parse(dump(x)) reproduces every value bit for bit.

#include <json.hpp>
#include <string>
#include <string_view>

#include "hawking/graph_surface.hpp"
#include "hawking/sweep_runner.hpp"
#include "hawking/variation_forms.hpp"
#include "hawking/warp_ode.hpp"

namespace hawking {

using Json = nlohmann::json;

Json to_json(const WarpFactor& w);
WarpFactor warp_from_json(const Json& j);

Json to_json(const HarmonicField& f);
HarmonicField field_from_json(const Json& j);

Json to_json(const SliceGeometry& s);
Json to_json(const JacobiSpectrum& s);
Json to_json(const QuadraticFormReport& q);
Json to_json(const SweepConfig& c);
Json to_json(const SweepRecord& r);
Json to_json(const SweepReport& r);
Json to_json(const FoliationScan& s);
Json to_json(const ConvergenceReport& c);

/// {"base_r", "a", "area", "hawking_mass", "el_residual_max", "q_integral", "phi"}
Json surface_report(const GraphSurface& s);

/// One row per record, header first, RFC 4180 quoting and CRLF line ends.
std::string sweep_csv(const SweepReport& r);
std::string csv_field(std::string_view v);

}  // namespace hawking
