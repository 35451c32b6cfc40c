// qaffine command-line tool: spectra, coherent-state geometry, weak
// correspondence, classical bounce dynamics, and operator-identity checks
// for the affine/canonical quantization catalog.  Emits deterministic CSV or
// JSON (see docs/formats.md for the frozen column/field contract).
//
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qaffine/classical.hpp"
#include "qaffine/coherent.hpp"
#include "qaffine/correspondence.hpp"
#include "qaffine/eigensolve.hpp"
#include "qaffine/errors.hpp"
#include "qaffine/operators.hpp"

using nlohmann::json;
using namespace qaffine;

namespace {

constexpr const char* kToolVersion = "qaffine 1.0.0";

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// RFC-4180-style field quoting (only needed for non-numeric fields).
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

struct CommonOpts {
    std::string format = "json";
    std::string output = "-";
    std::string baseline;
    std::size_t n = 4000;
};

struct ModelOpts {
    std::string name;
    double hbar = 1.0;
    double omega = 1.0;
    double mass = 1.0;
    double b = 1.0;
};

ModelSpec make_model(const ModelOpts& mo) {
    ModelSpec m;
    if (mo.name == "ho") {
        m = ModelSpec::harmonic_oscillator(mo.hbar, mo.omega);
    } else if (mo.name == "half-ho") {
        m = ModelSpec::half_harmonic_oscillator(mo.hbar, mo.omega);
    } else if (mo.name == "half-ho-canonical") {
        m = ModelSpec::half_harmonic_oscillator(mo.hbar, mo.omega);
        m.scheme = Scheme::Canonical;
        m.catalog = CatalogId::Generic;
    } else if (mo.name == "box") {
        m = ModelSpec::canonical_box(mo.b, mo.hbar);
    } else if (mo.name == "affine-box") {
        m = ModelSpec::affine_box(mo.b, mo.hbar);
    } else if (mo.name == "punctured-line") {
        m = ModelSpec::punctured_line(Potential::harmonic(), mo.hbar);
        m.omega = mo.omega;
    } else if (mo.name == "shifted-half-line") {
        m = ModelSpec::shifted_half_line(mo.b, Potential::harmonic(), mo.hbar);
        m.omega = mo.omega;
    } else if (mo.name == "punctured-exterior") {
        m = ModelSpec::punctured_exterior(mo.b, Potential::harmonic(), mo.hbar);
        m.omega = mo.omega;
    } else {
        throw std::invalid_argument("unknown model '" + mo.name + "'");
    }
    m.mass = mo.mass;
    m.validate();
    return m;
}

json model_provenance(const ModelOpts& mo) {
    return json{{"model", mo.name}, {"hbar", mo.hbar}, {"omega", mo.omega},
                {"mass", mo.mass}, {"b", mo.b}};
}

json grid_provenance(const Grid1D& g) {
    return json{{"n", g.n}, {"x_min", g.x_min}, {"x_max", g.x_max}, {"h", g.h}};
}

std::vector<std::pair<double, double>> parse_points(const std::string& s) {
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("bad --points entry '" + item + "' (want p:q)");
        pts.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
    if (pts.empty()) throw std::invalid_argument("--points is empty");
    return pts;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    return vals;
}

// ---------------------------------------------------------------------------
// Baseline regression comparison: numeric leaves within rtol; the provenance
// subtree (paths, tool version) is not compared.

bool baseline_equal(const json& a, const json& b, double rtol, const std::string& path,
                    std::string& why) {
    if (path == "/provenance") return true;
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>(), y = b.get<double>();
        const double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (std::abs(x - y) <= rtol * scale) return true;
        why = path + ": " + fmt_full(x) + " vs " + fmt_full(y);
        return false;
    }
    if (a.type() != b.type()) {
        why = path + ": type mismatch";
        return false;
    }
    if (a.is_object()) {
        if (a.size() != b.size()) {
            why = path + ": key set differs";
            return false;
        }
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) {
                why = path + "/" + it.key() + ": missing";
                return false;
            }
            if (!baseline_equal(it.value(), b[it.key()], rtol, path + "/" + it.key(), why))
                return false;
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            why = path + ": array length differs";
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!baseline_equal(a[i], b[i], rtol, path + "/" + std::to_string(i), why))
                return false;
        return true;
    }
    if (a != b) {
        why = path + ": value differs";
        return false;
    }
    return true;
}

void emit(const CommonOpts& common, const json& result, const std::string& csv) {
    if (!common.baseline.empty()) {
        std::ifstream in(common.baseline);
        if (!in) throw std::invalid_argument("cannot open baseline file " + common.baseline);
        json base = json::parse(in);
        const double rtol = result.contains("provenance")
                                ? result["provenance"]["tolerances"]["baseline_rtol"].get<double>()
                                : 1e-9;
        std::string why;
        if (!baseline_equal(base, result, rtol, "", why))
            throw SolverError("baseline mismatch at " + why);
    }
    std::string text = common.format == "csv" ? csv : result.dump(2) + "\n";
    if (common.output == "-") {
        std::cout << text;
    } else {
        std::ofstream out(common.output, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file " + common.output);
        out << text;
    }
}

// ---------------------------------------------------------------------------
// spectrum

int cmd_spectrum(const CommonOpts& common, const ModelOpts& mo, std::size_t levels,
                 std::optional<double> x_max, std::size_t fit_window) {
    const ModelSpec model = make_model(mo);

    std::optional<double> hint = x_max;
    if (!hint && !model.domain.bounded()) {
        const double ceiling = model.hbar * model.omega * (2.0 * static_cast<double>(levels) + 3.0);
        hint = truncation_radius(model, ceiling);
    }
    const Grid1D grid = build_grid(model.domain, common.n, hint).front();
    const Grid1D fine = grid.refined();

    const TridiagonalOperator T = assemble(model, grid);
    const TridiagonalOperator T2 = assemble(model, fine);
    const Spectrum coarse = eigen_bisection(T, levels + 1);
    const Spectrum refined = eigen_bisection(T2, levels + 1);
    const std::vector<double> ext = richardson(coarse, refined, levels + 1);

    const bool walled = model.domain.has_wall();
    const double wall = walled ? model.domain.lower_wall() : 0.0;

    json rows = json::array();
    std::string csv = "level,eigenvalue,spacing,boundary_exponent\n";
    for (std::size_t k = 0; k < levels; ++k) {
        json row;
        row["level"] = k;
        row["eigenvalue"] = ext[k];
        row["spacing"] = ext[k + 1] - ext[k];
        std::string bexp_s;
        if (walled) {
            const double bexp = boundary_exponent(coarse, k, wall, fit_window);
            row["boundary_exponent"] = bexp;
            bexp_s = fmt_full(bexp);
        } else {
            row["boundary_exponent"] = nullptr;
        }
        rows.push_back(row);
        csv += std::to_string(k) + "," + fmt_full(ext[k]) + "," + fmt_full(ext[k + 1] - ext[k]) +
               "," + csv_field(bexp_s) + "\n";
    }

    json cfg = model_provenance(mo);
    cfg["levels"] = levels;
    cfg["x_max"] = x_max ? *x_max : 0.0;
    cfg["fit_window"] = fit_window;

    json out;
    out["levels"] = rows;
    out["provenance"] = {
        {"command", "spectrum"},
        {"config", cfg},
        {"grid", grid_provenance(grid)},
        {"solver", "sturm-bisection + inverse iteration, richardson h->h/2"},
        {"tolerances",
         {{"eigenvalue_abs", "1e-12 * norm_bound"}, {"baseline_rtol", 1e-7}}},
        {"tool", kToolVersion},
    };
    emit(common, out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// metric / curvature

struct SchemeOpts {
    std::string scheme = "canonical";
    double omega = 1.0;
    double beta = 1.0;
    double hbar = 1.0;
};

CoherentScheme make_scheme(const SchemeOpts& so) {
    if (so.scheme == "canonical") return CanonicalScheme{so.omega, so.hbar};
    if (so.scheme == "affine") return AffineScheme{so.beta, so.hbar};
    throw std::invalid_argument("unknown scheme '" + so.scheme + "' (canonical|affine)");
}

Grid1D scheme_grid(const CoherentScheme& scheme, double q, std::size_t n) {
    if (const auto* aff = std::get_if<AffineScheme>(&scheme))
        return affine_state_grid(*aff, std::abs(q) * 1.3 + 0.1, n);
    return canonical_state_grid(std::get<CanonicalScheme>(scheme), std::abs(q) + 1.0, n);
}

int cmd_metric(const CommonOpts& common, const SchemeOpts& so, double p, double q, double delta) {
    const CoherentScheme scheme = make_scheme(so);
    const Grid1D grid = scheme_grid(scheme, q, common.n);
    const CoherentState fid = fiducial(scheme, grid);
    const MetricTensor2 g =
        delta > 0.0 ? fs_metric(scheme, fid, p, q, delta) : fs_metric_auto(scheme, fid, p, q);

    json out;
    out["g_pp"] = g.g_pp;
    out["g_pq"] = g.g_pq;
    out["g_qq"] = g.g_qq;
    out["provenance"] = {
        {"command", "metric"},
        {"config",
         {{"scheme", so.scheme}, {"omega", so.omega}, {"beta", so.beta}, {"hbar", so.hbar},
          {"p", p}, {"q", q}, {"delta", delta}}},
        {"grid", grid_provenance(grid)},
        {"solver", "central-difference fubini-study form, richardson delta pair"},
        {"tolerances", {{"richardson_consistency", 0.05}, {"baseline_rtol", 1e-6}}},
        {"tool", kToolVersion},
    };
    std::string csv = "g_pp,g_pq,g_qq\n" + fmt_full(g.g_pp) + "," + fmt_full(g.g_pq) + "," +
                      fmt_full(g.g_qq) + "\n";
    emit(common, out, csv);
    return 0;
}

int cmd_curvature(const CommonOpts& common, const SchemeOpts& so, double p, double q,
                  double delta) {
    const CoherentScheme scheme = make_scheme(so);
    const Grid1D grid = scheme_grid(scheme, q * 1.1 + 0.2, common.n);
    const CoherentState fid = fiducial(scheme, grid);
    const double R = scalar_curvature(scheme, fid, p, q, delta);

    json out;
    out["scalar_curvature"] = R;
    out["provenance"] = {
        {"command", "curvature"},
        {"config",
         {{"scheme", so.scheme}, {"omega", so.omega}, {"beta", so.beta}, {"hbar", so.hbar},
          {"p", p}, {"q", q}, {"delta", delta}}},
        {"grid", grid_provenance(grid)},
        {"solver", "brioschi curvature of the finite-difference metric, richardson step pair"},
        {"tolerances", {{"richardson_consistency", 0.2}, {"baseline_rtol", 1e-4}}},
        {"tool", kToolVersion},
    };
    std::string csv = "scalar_curvature\n" + fmt_full(R) + "\n";
    emit(common, out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// correspond

int cmd_correspond(const CommonOpts& common, const ModelOpts& mo, double beta,
                   const std::string& points_s, const std::string& hbars_s) {
    const ModelSpec model = make_model(mo);
    const auto points = parse_points(points_s);
    const std::vector<double> hbars = hbars_s.empty() ? default_hbar_ladder() : parse_list(hbars_s);
    const CoherentScheme scheme = model.scheme == Scheme::Affine
                                      ? CoherentScheme{AffineScheme{beta, mo.hbar}}
                                      : CoherentScheme{CanonicalScheme{mo.omega, mo.hbar}};

    const CorrespondenceReport rep = hbar_scaling(model, scheme, points, hbars, common.n);

    json pts = json::array();
    std::string csv = "p,q,hbar,value,classical,abs_diff,fitted_order\n";
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        json values = json::array();
        for (std::size_t k = 0; k < rep.hbars.size(); ++k) {
            values.push_back({{"hbar", rep.hbars[k]}, {"value", rep.values[i][k]}});
            csv += fmt_full(rep.points[i].first) + "," + fmt_full(rep.points[i].second) + "," +
                   fmt_full(rep.hbars[k]) + "," + fmt_full(rep.values[i][k]) + "," +
                   fmt_full(rep.classical[i]) + "," +
                   fmt_full(std::abs(rep.values[i][k] - rep.classical[i])) + "," +
                   fmt_full(rep.fitted_order[i]) + "\n";
        }
        pts.push_back({{"p", rep.points[i].first},
                       {"q", rep.points[i].second},
                       {"classical", rep.classical[i]},
                       {"fitted_order", rep.fitted_order[i]},
                       {"values", values}});
    }

    json out;
    out["points"] = pts;
    out["provenance"] = {
        {"command", "correspond"},
        {"config",
         {{"model", mo.name}, {"hbar", mo.hbar}, {"omega", mo.omega}, {"mass", mo.mass},
          {"b", mo.b}, {"beta", beta}, {"points", points_s}, {"hbars", hbars_s}}},
        {"grid", {{"n", common.n}}},
        {"solver", "h-weighted quadratic form on closed-form displaced states"},
        {"tolerances", {{"baseline_rtol", 1e-7}}},
        {"tool", kToolVersion},
    };
    emit(common, out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// classical

int cmd_classical(const CommonOpts& common, const ModelOpts& mo, double p0, double q0, double dt,
                  double t_end) {
    const ModelSpec model = make_model(mo);
    const TrajectoryResult traj = integrate(model, p0, q0, dt, t_end);

    double period = std::numeric_limits<double>::quiet_NaN();
    try {
        period = period_estimate(traj);
    } catch (const SolverError&) {
        // fewer than 3 recurrences in this window; reported as null
    }

    const double e0 = traj.energy_series.front();
    const double e_end = traj.energy_series.back();
    double max_dev = 0.0;
    for (double e : traj.energy_series) max_dev = std::max(max_dev, std::abs(e - e0));

    json bounces = json::array();
    for (std::size_t i = 0; i < traj.bounce_events.size() && i < 16; ++i)
        bounces.push_back({{"time", traj.bounce_events[i].time},
                           {"wall", traj.bounce_events[i].wall}});

    json out;
    out["period"] = std::isnan(period) ? json(nullptr) : json(period);
    out["bounce_count"] = traj.bounce_events.size();
    out["first_bounces"] = bounces;
    out["energy_initial"] = e0;
    out["energy_final"] = e_end;
    out["energy_drift_rel"] = std::abs(e_end - e0) / std::max(std::abs(e0), 1e-300);
    out["energy_max_dev_rel"] = max_dev / std::max(std::abs(e0), 1e-300);
    out["provenance"] = {
        {"command", "classical"},
        {"config",
         {{"model", mo.name}, {"hbar", mo.hbar}, {"omega", mo.omega}, {"mass", mo.mass},
          {"b", mo.b}, {"p0", p0}, {"q0", q0}, {"dt", dt}, {"t_end", t_end}}},
        {"solver", "velocity-verlet, bisection wall events (1e-12 time accuracy)"},
        {"tolerances", {{"event_time_abs", 1e-12}, {"baseline_rtol", 1e-9}}},
        {"tool", kToolVersion},
    };

    std::string csv = "time,p,q,energy\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv += fmt_full(traj.times[i]) + "," + fmt_full(traj.p_series[i]) + "," +
               fmt_full(traj.q_series[i]) + "," + fmt_full(traj.energy_series[i]) + "\n";
    }
    emit(common, out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// identities

int cmd_identities(const CommonOpts& common, double hbar, std::size_t n_base,
                   std::size_t refinements, double x_max) {
    std::vector<std::function<double(double)>> fns = {
        [x_max](double x) { return x * x * x * std::pow(x_max - x, 3.0); },
        [x_max](double x) { return std::pow(std::sin(std::numbers::pi * x / x_max), 3.0); },
        [x_max](double x) {
            return x * x * x * x * std::pow(x_max - x, 3.0) * std::exp(-x);
        },
    };

    json residuals = json::array();
    json ratios = json::array();
    double prev = 0.0;
    std::size_t n = n_base;
    for (std::size_t r = 0; r <= refinements; ++r) {
        const Grid1D grid = Grid1D::uniform(0.0, x_max, n);
        const double res = kinetic_identity_residual(grid, hbar, fns);
        residuals.push_back({{"n", n}, {"residual", res}});
        if (r > 0) ratios.push_back(prev / res);
        prev = res;
        n = 2 * n + 1;
    }

    // Boundary-term checks: total-derivative quadrature vs endpoint values.
    const Grid1D g01 = Grid1D::uniform(0.0, 1.0, 2000);
    std::vector<double> ones(g01.n, 1.0), lin(g01.n);
    for (std::size_t j = 0; j < g01.n; ++j) lin[j] = g01.nodes[j];
    const Grid1D gsym = Grid1D::uniform(-1.0, 1.0, 2000);
    std::vector<double> cosw(gsym.n);
    for (std::size_t j = 0; j < gsym.n; ++j)
        cosw[j] = std::cos(0.5 * std::numbers::pi * gsym.nodes[j]);

    json bt;
    bt["constant_pair"] = boundary_term(ones, ones, g01);        // = 0
    bt["linear_times_one"] = boundary_term(lin, ones, g01);      // = 1
    bt["dirichlet_cos_pair"] = boundary_term(cosw, cosw, gsym);  // = 0

    // Dilation Hermiticity: <f|D f> is real for any f by construction.
    const Grid1D gd = Grid1D::uniform(0.0, 5.0, 1000);
    const DilationMatrix D = dilation_matrix(gd, hbar);
    std::vector<std::complex<double>> f(gd.n);
    for (std::size_t j = 0; j < gd.n; ++j) {
        const double x = gd.nodes[j];
        f[j] = std::polar(x * std::exp(-x), 0.7 * x);
    }
    const double herm = std::abs(D.expectation(f).imag());

    json out;
    out["kinetic_identity"] = {{"residuals", residuals}, {"convergence_ratios", ratios}};
    out["boundary_terms"] = bt;
    out["dilation_hermiticity_residual"] = herm;
    out["provenance"] = {
        {"command", "identities"},
        {"config",
         {{"hbar", hbar}, {"n_base", n_base}, {"refinements", refinements}, {"x_max", x_max}}},
        {"solver", "banded dilation stencil, dirichlet 3-point laplacian"},
        {"tolerances", {{"baseline_rtol", 1e-6}}},
        {"tool", kToolVersion},
    };

    std::string csv = "n,residual\n";
    for (const auto& row : residuals)
        csv += std::to_string(row["n"].get<std::size_t>()) + "," +
               fmt_full(row["residual"].get<double>()) + "\n";
    emit(common, out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// --config splicing: flat key=value lines appended after the command line;
// with TakeLast policy on every option the file values override flags.

std::vector<std::string> splice_config(std::vector<std::string> args) {
    std::string config_path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty()) return out;

    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file " + config_path);
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad config line (want key=value): " + line);
        std::string key = line.substr(first, eq - first);
        std::string val = line.substr(eq + 1);
        auto strip = [](std::string& s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
        };
        strip(key);
        strip(val);
        if (key.empty()) throw std::invalid_argument("bad config line (empty key): " + line);
        out.push_back("--" + key + "=" + val);
    }
    return out;
}

void take_last_everywhere(CLI::App* app) {
    for (auto* opt : app->get_options()) {
        if (opt->get_expected_max() == 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
    for (auto* sub : app->get_subcommands({})) take_last_everywhere(sub);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affine/canonical quantization toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    ModelOpts mo;
    SchemeOpts so;
    std::size_t levels = 10;
    double x_max_flag = 0.0;  // 0 = auto
    std::size_t fit_window = 8;
    double p = 0.0, q = 1.0, delta = 0.0;
    double beta = 1.0;
    std::string points_s = "0:1";
    std::string hbars_s;
    double p0 = 0.0, q0 = 1.0, dt = 1e-4, t_end = 10.0;
    double id_hbar = 1.0, id_xmax = 5.0;
    std::size_t id_nbase = 250, id_refinements = 3;
    double curv_delta = 1e-3;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "output format: csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", common.output, "output path ('-' = stdout)");
        sub->add_option("--check-baseline", common.baseline,
                        "compare the JSON result against a stored baseline");
        sub->add_option("--n", common.n, "interior grid nodes");
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", mo.name,
                        "ho|half-ho|half-ho-canonical|box|affine-box|punctured-line|"
                        "shifted-half-line|punctured-exterior")
            ->required();
        sub->add_option("--hbar", mo.hbar, "Planck constant");
        sub->add_option("--omega", mo.omega, "oscillator frequency");
        sub->add_option("--mass", mo.mass, "particle mass");
        sub->add_option("--b", mo.b, "wall parameter");
    };
    auto add_scheme = [&](CLI::App* sub) {
        sub->add_option("--scheme", so.scheme, "canonical|affine");
        sub->add_option("--omega", so.omega, "canonical fiducial frequency");
        sub->add_option("--beta", so.beta, "affine fiducial parameter (> 1/2)");
        sub->add_option("--hbar", so.hbar, "Planck constant");
        sub->add_option("--p", p, "momentum label");
        sub->add_option("--q", q, "position label (affine: > 0)");
    };

    CLI::App* sp = app.add_subcommand("spectrum", "eigenvalues, spacings, boundary exponents");
    add_model(sp);
    add_common(sp);
    sp->add_option("--levels", levels, "number of levels to report");
    sp->add_option("--x-max", x_max_flag, "grid cut (0 = choose by truncation radius)");
    sp->add_option("--fit-window", fit_window, "nodes in the boundary-exponent fit");

    CLI::App* me = app.add_subcommand("metric", "fubini-study metric at a phase-space point");
    add_scheme(me);
    add_common(me);
    me->add_option("--delta", delta, "label finite-difference step (0 = auto ladder)");

    CLI::App* cu = app.add_subcommand("curvature", "scalar curvature of the label metric");
    add_scheme(cu);
    add_common(cu);
    cu->add_option("--delta", curv_delta, "metric finite-difference step");

    CLI::App* co = app.add_subcommand("correspond", "weak-correspondence hbar scaling");
    add_model(co);
    add_common(co);
    co->add_option("--beta", beta, "affine fiducial parameter");
    co->add_option("--points", points_s, "phase-space points p:q[,p:q...]");
    co->add_option("--hbars", hbars_s, "descending hbar ladder (default 1,...,1/16)");

    CLI::App* cl = app.add_subcommand("classical", "bounce dynamics of the classical model");
    add_model(cl);
    add_common(cl);
    cl->add_option("--p0", p0, "initial momentum");
    cl->add_option("--q0", q0, "initial position");
    cl->add_option("--dt", dt, "time step");
    cl->add_option("--t-end", t_end, "integration time");

    CLI::App* id = app.add_subcommand("identities", "operator identity residuals");
    add_common(id);
    id->add_option("--hbar", id_hbar, "Planck constant");
    id->add_option("--n-base", id_nbase, "coarsest grid size");
    id->add_option("--refinements", id_refinements, "number of grid doublings");
    id->add_option("--x-max", id_xmax, "test interval length");

    take_last_everywhere(&app);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = splice_config(std::move(args));
        // CLI11 parses reversed argv.
        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (sp->parsed())
            return cmd_spectrum(common, mo, levels,
                                x_max_flag > 0.0 ? std::optional<double>(x_max_flag) : std::nullopt,
                                fit_window);
        if (me->parsed()) return cmd_metric(common, so, p, q, delta);
        if (cu->parsed()) return cmd_curvature(common, so, p, q, curv_delta);
        if (co->parsed()) return cmd_correspond(common, mo, beta, points_s, hbars_s);
        if (cl->parsed()) return cmd_classical(common, mo, p0, q0, dt, t_end);
        if (id->parsed()) return cmd_identities(common, id_hbar, id_nbase, id_refinements, id_xmax);
        std::cerr << R"({"error":{"code":2,"message":"no subcommand"}})" << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << R"({"error":{"code":2,"message":)" << json(std::string(e.what())).dump()
                  << "}}\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << R"({"error":{"code":2,"message":)" << json(std::string(e.what())).dump()
                  << "}}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":{"code":3,"message":)" << json(std::string(e.what())).dump()
                  << "}}\n";
        return 3;
    }
}
