#pragma once

#include "spdelab/bounds.hpp"
#include "spdelab/moment_curve.hpp"
#include "spdelab/simulator.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace spdelab {

/// Version stamped into every JSON document as `schema_version`.
inline constexpr int kSchemaVersion = 1;

/// Insertion-ordered so the same data always serialises to the same bytes.
using Json = nlohmann::ordered_json;

/// Finite numbers as JSON numbers; inf, -inf and nan as the strings
/// "inf", "-inf", "nan".
Json number_to_json(double x);
double number_from_json(const Json& j);

/// Shortest text that reads back to the same double ("inf"/"nan" as above).
std::string format_double(double x);

Json to_json(const MomentCurve& c);
MomentCurve moment_curve_from_json(const Json& j);

Json to_json(const BoundsReport& r);
BoundsReport bounds_report_from_json(const Json& j);

/// One row per (curve, time): t,p,moment,stderr,n_paths.
std::string moments_csv(const std::vector<MomentCurve>& curves);
/// Inverse of moments_csv; fits and metadata are not carried by the CSV.
std::vector<MomentCurve> parse_moments_csv(const std::string& text);

/// Deterministic curve: t,moment,stderr,meta.
std::string renewal_csv(const MomentCurve& c);

/// One row per requested p: model,p,z_p,gamma_p_upper,gamma2_lower,
/// exact_anderson,delta_p,weakly_intermittent.
std::string bounds_csv(const BoundsReport& r);

/// Writes `content` to a temporary file next to `path` and renames it over
/// `path`, so readers never see a partial file. Creates parent directories.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Field values as little-endian 64-bit reals in `stem`.bin plus a JSON
/// sidecar `stem`.json holding N, L, t and seed.
void write_snapshot(const std::filesystem::path& dir, const std::string& stem, const Field& field,
                    const GridSpec& grid);

}  // namespace spdelab
