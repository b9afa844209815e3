#include "pi2/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include "pi2/errors.hpp"

namespace pi2::io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const bvp::LineDomain& d) {
    return json{{"phi", d.phi},       {"b", to_json(d.b)},
                {"xi_l", d.xi_l},     {"xi_r", d.xi_r},
                {"t", to_json(d.t)},  {"Nc", d.Nc},
                {"arg_left", d.arg_left}, {"arg_right", d.arg_right},
                {"threshold", d.threshold}, {"truncation_cap", d.truncation_cap}};
}

json to_json(const series::TruncationReport& r) {
    return json{{"m_selected", r.m_selected},
                {"last_term_size", r.last_term_size},
                {"endpoint_modulus", r.endpoint.modulus},
                {"endpoint_argument", r.endpoint.argument},
                {"threshold_reached", r.threshold_reached}};
}

json to_json(const model_curve::ModelCurvePoint& p) {
    return json{{"x_modulus", p.x.modulus}, {"x_argument", p.x.argument},
                {"t", to_json(p.t)},        {"lambda5", to_json(p.lambda5)},
                {"lambda1", to_json(p.lambda1)}, {"lambda3", to_json(p.lambda3)},
                {"F1", to_json(p.F1)},      {"F3", to_json(p.F3)},
                {"Fpp1", to_json(p.Fpp1)},  {"Fpp3", to_json(p.Fpp3)},
                {"inv_sqrt_Fpp1", to_json(p.inv_sqrt_Fpp1)},
                {"inv_sqrt_Fpp3", to_json(p.inv_sqrt_Fpp3)},
                {"Fm1", to_json(p.Fm1)},    {"Fm2", to_json(p.Fm2)}};
}

json to_json(const analysis::DecayFit& f) {
    return json{{"rate", f.rate},   {"period", f.period},       {"r2", f.r_squared},
                {"window", {f.window_lo, f.window_hi}}, {"n_samples", f.n_samples}};
}

void write_solution_csv(const bvp::LineSolution& sol, const std::filesystem::path& csv) {
    std::ofstream out(csv);
    if (!out) throw Error("cannot open " + csv.string());
    out << "xi,re_x,im_x,re_u,im_u\n";
    for (int j = 0; j < int(sol.u.size()); ++j) {
        const double xi = sol.grid.nodes[std::size_t(j)];
        const cplx x = sol.x_of(xi);
        out << fmt(xi) << ',' << fmt(x.real()) << ',' << fmt(x.imag()) << ','
            << fmt(sol.u(j).real()) << ',' << fmt(sol.u(j).imag()) << '\n';
    }
}

json solution_sidecar(const bvp::LineSolution& sol) {
    return json{{"domain", to_json(sol.domain)},
                {"residual_norm", sol.residual_norm},
                {"iterations", sol.iterations},
                {"line_search_failures", sol.line_search_failures},
                {"trunc_left", to_json(sol.trunc_left)},
                {"trunc_right", to_json(sol.trunc_right)},
                {"warnings", sol.warnings}};
}

void write_series_csv(const std::vector<cplx>& a, const std::filesystem::path& csv) {
    std::ofstream out(csv);
    if (!out) throw Error("cannot open " + csv.string());
    out << "n,re_a,im_a,log10_abs_a\n";
    for (int n = 0; n < int(a.size()); ++n) {
        const double mag = std::abs(a[std::size_t(n)]);
        out << n << ',' << fmt(a[std::size_t(n)].real()) << ',' << fmt(a[std::size_t(n)].imag())
            << ',' << (mag > 0 ? fmt(std::log10(mag)) : "-inf") << '\n';
    }
}

void write_field_csv(const analysis::SectorField& f, const std::filesystem::path& csv) {
    std::ofstream out(csv);
    if (!out) throw Error("cannot open " + csv.string());
    out << "r,theta,re_u,im_u\n";
    for (std::size_t i = 0; i < f.r.size(); ++i)
        for (std::size_t j = 0; j < f.theta.size(); ++j) {
            const cplx u = f.u[i * f.theta.size() + j];
            out << fmt(f.r[i]) << ',' << fmt(f.theta[j]) << ',' << fmt(u.real()) << ','
                << fmt(u.imag()) << '\n';
        }
}

void write_json(const json& j, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("cannot open " + file.string());
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file.string());
    json j;
    in >> j;
    return j;
}

std::string config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::optional<bvp::LineSolution> SolutionCache::load(const bvp::LineDomain& d) const {
    if (!enabled) return std::nullopt;
    const auto dir = root / config_hash(to_json(d));
    const auto meta_file = dir / "solution.json";
    const auto data_file = dir / "solution.csv";
    if (!std::filesystem::exists(meta_file) || !std::filesystem::exists(data_file))
        return std::nullopt;
    try {
        const json meta = read_json(meta_file);
        bvp::LineSolution sol;
        sol.domain = d;
        sol.grid = spectral::build_grid(d.Nc, d.xi_l, d.xi_r);
        sol.u.resize(d.Nc + 1);
        std::ifstream in(data_file);
        std::string line;
        std::getline(in, line);  // header
        for (int j = 0; j <= d.Nc; ++j) {
            if (!std::getline(in, line)) return std::nullopt;
            double xi, rx, ix, ru, iu;
            if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg", &xi, &rx, &ix, &ru, &iu) != 5)
                return std::nullopt;
            sol.u(j) = cplx(ru, iu);
        }
        sol.residual_norm = meta.at("residual_norm").get<double>();
        sol.iterations = meta.at("iterations").get<int>();
        sol.line_search_failures = meta.at("line_search_failures").get<int>();
        return sol;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void SolutionCache::store(const bvp::LineSolution& sol) const {
    if (!enabled) return;
    const auto dir = root / config_hash(to_json(sol.domain));
    std::filesystem::create_directories(dir);
    write_solution_csv(sol, dir / "solution.csv");
    write_json(solution_sidecar(sol), dir / "solution.json");
}

}  // namespace pi2::io
