#pragma once

#include <filesystem>
#include <string>

#include "pi2/analysis.hpp"
#include "pi2/bvp.hpp"
#include "pi2/model_curve.hpp"

// single-header nlohmann/json from vendor/
#include <json.hpp>

namespace pi2::io {

using json = nlohmann::json;

json to_json(cplx z);
json to_json(const bvp::LineDomain& d);
json to_json(const series::TruncationReport& r);
json to_json(const model_curve::ModelCurvePoint& p);
json to_json(const analysis::DecayFit& f);

// Solution CSV: xi, re_x, im_x, re_u, im_u (+ JSON sidecar with the domain,
// residual norm, iterations and truncation reports).
void write_solution_csv(const bvp::LineSolution& sol, const std::filesystem::path& csv);
json solution_sidecar(const bvp::LineSolution& sol);

// Coefficient CSV: n, re_a, im_a, log10_abs_a.
void write_series_csv(const std::vector<cplx>& a, const std::filesystem::path& csv);

// Sector field CSV: r, theta, re_u, im_u.
void write_field_csv(const analysis::SectorField& f, const std::filesystem::path& csv);

void write_json(const json& j, const std::filesystem::path& file);
json read_json(const std::filesystem::path& file);

// FNV-1a hash of the canonical dump; used as the solution-cache key.
std::string config_hash(const json& j);

// Solution cache keyed by the resolved line-domain configuration.
struct SolutionCache {
    std::filesystem::path root;
    bool enabled = true;

    std::optional<bvp::LineSolution> load(const bvp::LineDomain& d) const;
    void store(const bvp::LineSolution& sol) const;
};

// Deterministic float formatting shared by every emitter.
std::string fmt(double v);

}  // namespace pi2::io
