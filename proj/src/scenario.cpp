#include "ggf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ggf/dynamics.hpp"

namespace ggf {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config ----

static void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json doc = json::parse(in);

    reject_unknown(doc, {"version", "name", "tessellation", "kernel", "potential",
                         "initial", "horizon", "dt_factor", "edb_bound", "probes",
                         "reference", "export_trajectories"},
                   "top level");
    if (!doc.contains("version") || doc["version"].get<int>() != 1)
        throw std::invalid_argument("config: missing or unsupported \"version\"");

    Scenario sc;
    sc.name = doc.value("name", "study");

    const json& tj = doc.at("tessellation");
    reject_unknown(tj, {"builder", "dim", "h", "box", "alpha", "seeds"}, "tessellation");
    sc.builder = tj.at("builder").get<std::string>();
    sc.dim = tj.value("dim", sc.builder == "mixed1d" ? 1 : 2);
    sc.h_list = tj.at("h").get<std::vector<double>>();
    if (sc.h_list.empty()) throw std::invalid_argument("config: empty h list");
    std::sort(sc.h_list.begin(), sc.h_list.end(), std::greater<double>());
    if (tj.contains("box")) sc.box_lengths = tj["box"].get<std::vector<double>>();
    sc.alpha = tj.value("alpha", 0.0);
    sc.voronoi_seeds = tj.value("seeds", 50);

    if (doc.contains("kernel")) {
        const json& kj = doc["kernel"];
        reject_unknown(kj, {"c", "c_axis", "rate_over_h2"}, "kernel");
        if (kj.contains("rate_over_h2")) {
            if (kj.contains("c") || kj.contains("c_axis"))
                throw std::invalid_argument(
                    "config: rate_over_h2 excludes the conductance keys");
            sc.uniform_rate_kernel = true;
            sc.rate_over_h2 = kj["rate_over_h2"].get<double>();
            if (sc.rate_over_h2 <= 0.0)
                throw std::invalid_argument("config: rate_over_h2 must be positive");
        }
        if (kj.contains("c_axis")) {
            const auto v = kj["c_axis"].get<std::vector<double>>();
            if (v.size() != 2) throw std::invalid_argument("config: c_axis needs 2 entries");
            sc.axis_kernel = true;
            sc.c_axis[0] = v[0];
            sc.c_axis[1] = v[1];
        }
        sc.c_iso = kj.value("c", 0.5);
    }

    if (doc.contains("potential")) {
        const json& pj = doc["potential"];
        reject_unknown(pj, {"kind", "slope", "depth", "width", "center"}, "potential");
        sc.potential = pj.at("kind").get<std::string>();
        if (sc.potential != "zero" && sc.potential != "linear" &&
            sc.potential != "gaussian-well")
            throw std::invalid_argument("config: unknown potential \"" + sc.potential + "\"");
        if (pj.contains("slope")) {
            const auto v = pj["slope"].get<std::vector<double>>();
            sc.slope = {v[0], v.size() > 1 ? v[1] : 0.0};
        }
        sc.well_depth = pj.value("depth", 1.0);
        sc.well_width = pj.value("width", 0.25);
        if (pj.contains("center")) {
            const auto v = pj["center"].get<std::vector<double>>();
            sc.well_center = {v[0], v.size() > 1 ? v[1] : 0.0};
        }
    }

    if (doc.contains("initial")) {
        const json& ij = doc["initial"];
        reject_unknown(ij, {"kind", "point"}, "initial");
        sc.initial = ij.at("kind").get<std::string>();
        if (sc.initial != "equilibrium" && sc.initial != "cosine-bump" &&
            sc.initial != "cell-indicator")
            throw std::invalid_argument("config: unknown initial \"" + sc.initial + "\"");
        if (ij.contains("point")) {
            const auto v = ij["point"].get<std::vector<double>>();
            sc.indicator_point = {v[0], v.size() > 1 ? v[1] : 0.0};
        }
    }

    sc.horizon = doc.value("horizon", 0.1);
    sc.dt_factor = doc.value("dt_factor", 0.25);
    sc.edb_bound = doc.value("edb_bound", 1e-2);
    if (sc.horizon <= 0.0 || sc.dt_factor <= 0.0)
        throw std::invalid_argument("config: horizon and dt_factor must be positive");

    if (doc.contains("probes")) {
        const json& qj = doc["probes"];
        reject_unknown(qj, {"centers", "eps", "c_zeta"}, "probes");
        if (qj.contains("centers"))
            for (const auto& c : qj["centers"]) {
                const auto v = c.get<std::vector<double>>();
                sc.probe_centers.push_back({v[0], v.size() > 1 ? v[1] : 0.0});
            }
        sc.probe_eps = qj.value("eps", 0.25);
        sc.c_zeta = qj.value("c_zeta", 1.0);
    }

    if (doc.contains("reference")) {
        const json& rj = doc["reference"];
        reject_unknown(rj, {"dt", "delta"}, "reference");
        sc.reference_dt = rj.value("dt", 1e-4);
        sc.reference_delta = rj.value("delta", 0.0);
    }
    sc.export_trajectories = doc.value("export_trajectories", false);
    return sc;
}

// -------------------------------------------------------------- catalogs ----

std::function<double(const Vec&)> make_potential(const Scenario& sc) {
    if (sc.potential == "zero") return [](const Vec&) { return 0.0; };
    if (sc.potential == "linear") {
        const Vec s = sc.slope;
        return [s](const Vec& x) { return dot(s, x); };
    }
    const double d = sc.well_depth, w = sc.well_width;
    const Vec c = sc.well_center;
    return [d, w, c](const Vec& x) {
        const Vec r = x - c;
        return -d * std::exp(-dot(r, r) / (2.0 * w * w));
    };
}

static Tessellation build(const Scenario& sc, double h, std::uint64_t seed) {
    if (sc.builder == "lattice") return build_lattice(h, sc.dim, sc.box_lengths);
    if (sc.builder == "tilted") {
        const int n = std::max(1, static_cast<int>(std::llround(1.0 / h)));
        return build_tilted_lattice(h, sc.alpha, n, n);
    }
    if (sc.builder == "mixed1d") return build_1d_mixed(h);
    if (sc.builder == "voronoi") {
        const double scale = sc.h_list.front() / h;
        const int n = std::max(4, static_cast<int>(std::llround(sc.voronoi_seeds * scale * scale)));
        std::mt19937_64 rng(seed);
        Box box{{0.0, 0.0}, {sc.box_lengths[0], sc.box_lengths.size() > 1 ? sc.box_lengths[1] : 1.0}};
        std::uniform_real_distribution<double> ux(box.lo[0], box.hi[0]);
        std::uniform_real_distribution<double> uy(box.lo[1], box.hi[1]);
        std::vector<Vec> seeds;
        for (int i = 0; i < n; ++i) seeds.push_back({ux(rng), uy(rng)});
        return build_voronoi(seeds, box);
    }
    throw std::invalid_argument("config: unknown builder \"" + sc.builder + "\"");
}

static MarkovData make_data(const Scenario& sc, const Tessellation& t,
                            const std::function<double(const Vec&)>& V) {
    StationaryMeasure pi = pi_from_potential(t, V);
    if (sc.uniform_rate_kernel) {
        // symmetric rates; detailed balance requires a uniform stationary
        // density, so this option is restricted to congruent-cell meshes
        const double lo = *std::min_element(pi.mass.begin(), pi.mass.end());
        const double hi = *std::max_element(pi.mass.begin(), pi.mass.end());
        if (hi - lo > 1e-12 * hi)
            throw std::invalid_argument(
                "config: rate_over_h2 needs a uniform stationary measure");
        const double rate = sc.rate_over_h2 / (t.spacing * t.spacing);
        std::map<std::pair<int, int>, double> rates;
        for (const Face& f : t.faces) rates[{f.k, f.l}] = rates[{f.l, f.k}] = rate;
        JumpKernel kappa = kernel_explicit(t, rates);
        MarkovData md;
        md.tess = &t;
        md.theta = joint_from(t, pi, kappa);
        md.pi = std::move(pi);
        md.kappa = std::move(kappa);
        return md;
    }
    std::function<double(const Face&)> c;
    if (sc.axis_kernel) {
        const double cx = sc.c_axis[0], cy = sc.c_axis[1];
        c = [cx, cy](const Face& f) {
            return std::abs(f.normal[0]) >= std::abs(f.normal[1]) ? cx : cy;
        };
    } else {
        const double ci = sc.c_iso;
        c = [ci](const Face&) { return ci; };
    }
    auto [kappa, theta] = kernel_from_conductance(t, pi, c);
    MarkovData md;
    md.tess = &t;
    md.pi = std::move(pi);
    md.kappa = std::move(kappa);
    md.theta = std::move(theta);
    return md;
}

std::function<double(const Vec&)> make_initial_density(const Scenario& sc,
                                                       const Tessellation& t) {
    if (sc.initial != "cosine-bump")
        throw std::logic_error("make_initial_density: catalog entry has no density");
    // 1 + (1/2) prod_i cos(pi (x_i - lo_i) / L_i); no-flux compatible
    Vec lo{0.0, 0.0}, len{1.0, 1.0};
    if (t.dim == 1) {
        double a = t.domain[0][0], b = t.domain[1][0];
        lo = {a, 0.0};
        len = {b - a, 1.0};
    } else {
        lo = t.domain[0];
        for (const Vec& v : t.domain) {
            lo[0] = std::min(lo[0], v[0]);
            lo[1] = std::min(lo[1], v[1]);
        }
        Vec hi = lo;
        for (const Vec& v : t.domain) {
            hi[0] = std::max(hi[0], v[0]);
            hi[1] = std::max(hi[1], v[1]);
        }
        len = hi - lo;
    }
    const int dim = t.dim;
    return [lo, len, dim](const Vec& x) {
        double m = 0.5;
        for (int i = 0; i < dim; ++i) m *= std::cos(M_PI * (x[i] - lo[i]) / len[i]);
        return 1.0 + m;
    };
}

static DiscreteState make_initial(const Scenario& sc, const MarkovData& md) {
    const Tessellation& t = *md.tess;
    DiscreteState rho;
    rho.data = &md;
    if (sc.initial == "equilibrium") {
        rho.rho = md.pi.mass;
        return rho;
    }
    if (sc.initial == "cell-indicator") {
        rho.rho.assign(t.n_cells(), 0.0);
        const int id = t.locate(sc.indicator_point);
        if (id < 0) throw std::invalid_argument("initial: indicator point outside domain");
        rho.rho[id] = 1.0;
        for (std::size_t k = 0; k < rho.rho.size(); ++k)
            rho.rho[k] = std::max(rho.rho[k], 1e-12 * md.pi.mass[k]);
        const double m = rho.total();
        for (double& v : rho.rho) v /= m;
        return rho;
    }
    const auto f = make_initial_density(sc, t);
    rho.rho.resize(t.n_cells());
    const auto avg = project(t, f);
    for (const Cell& c : t.cells) rho.rho[c.id] = avg[c.id] * c.volume;
    const double m = rho.total();
    for (double& v : rho.rho) v /= m;
    return rho;
}

// ------------------------------------------------------------- utilities ----

static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t hash = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    return hash;
}

static void write_manifest(const std::string& out_dir,
                           const std::vector<std::string>& files,
                           const std::vector<std::string>& notes) {
    std::ostringstream os;
    os << "{\"artifacts\":[";
    bool first = true;
    for (const std::string& rel : files) {
        if (!first) os << ",";
        first = false;
        char hex[20];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(out_dir + "/" + rel)));
        os << "{\"path\":\"" << rel << "\",\"fnv1a64\":\"" << hex << "\"}";
    }
    os << "],\"notes\":[";
    first = true;
    for (const std::string& n : notes) {
        if (!first) os << ",";
        first = false;
        os << "\"" << n << "\"";
    }
    os << "]}\n";
    std::ofstream(out_dir + "/manifest.json") << os.str();
}

// ------------------------------------------------------------------ svg ----

static void write_svg_loglog(const std::string& path, const std::string& title,
                             const std::vector<std::pair<double, double>>& pts) {
    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" "
           "viewBox=\"0 0 480 360\">\n";
    out << "<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
    out << "<text x=\"240\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n";
    std::vector<std::pair<double, double>> good;
    for (const auto& [x, y] : pts)
        if (x > 0.0 && y > 0.0) good.push_back({std::log10(x), std::log10(y)});
    if (good.size() >= 2) {
        double x0 = good[0].first, x1 = x0, y0 = good[0].second, y1 = y0;
        for (const auto& [x, y] : good) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
        if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
        auto px = [&](double x) { return 60.0 + 380.0 * (x - x0) / (x1 - x0); };
        auto py = [&](double y) { return 320.0 - 280.0 * (y - y0) / (y1 - y0); };
        out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : good) out << px(x) << "," << py(y) << " ";
        out << "\"/>\n";
        for (const auto& [x, y] : good)
            out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
                << "\" r=\"3\" fill=\"crimson\"/>\n";
        out << "<line x1=\"60\" y1=\"320\" x2=\"440\" y2=\"320\" stroke=\"black\"/>\n";
        out << "<line x1=\"60\" y1=\"40\" x2=\"60\" y2=\"320\" stroke=\"black\"/>\n";
        out << "<text x=\"60\" y=\"340\" font-size=\"11\">1e" << x0 << "</text>\n";
        out << "<text x=\"410\" y=\"340\" font-size=\"11\">1e" << x1 << "</text>\n";
    } else {
        out << "<text x=\"240\" y=\"180\" text-anchor=\"middle\" font-size=\"12\">"
               "insufficient positive data</text>\n";
    }
    out << "</svg>\n";
}

void emit_plots(const StudyResult& result, const std::string& out_dir) {
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/error_vs_h.dat");
        out << "# h l1_error order\n";
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            out << num(result.rows[i].h) << " " << num(result.rows[i].l1_error_at_T) << " ";
            if (i == 0) {
                out << "\n";
            } else {
                const double order = std::log(result.rows[i - 1].l1_error_at_T /
                                              result.rows[i].l1_error_at_T) /
                                     std::log(result.rows[i - 1].h / result.rows[i].h);
                out << num(order) << "\n";
            }
        }
    }
    {
        std::ofstream out(out_dir + "/edb_vs_dt.dat");
        out << "# dt edb_residual\n";
        for (const StudyRow& r : result.rows)
            out << num(r.dt) << " " << num(r.edb_residual) << "\n";
    }
    {
        std::ofstream out(out_dir + "/tensor_vs_h.dat");
        out << "# h T11 T12 T22\n";
        for (const StudyRow& r : result.rows)
            out << num(r.h) << " " << num(r.tensor_probe.a11) << " "
                << num(r.tensor_probe.a12) << " " << num(r.tensor_probe.a22) << "\n";
    }
    std::vector<std::pair<double, double>> err_pts, edb_pts, ten_pts;
    for (const StudyRow& r : result.rows) {
        err_pts.push_back({r.h, r.l1_error_at_T});
        edb_pts.push_back({r.dt, r.edb_residual});
        ten_pts.push_back({r.h, std::abs(r.tensor_probe.a11)});
    }
    write_svg_loglog(out_dir + "/error_vs_h.svg", "L1 error vs h", err_pts);
    write_svg_loglog(out_dir + "/edb_vs_dt.svg", "EDB residual vs dt", edb_pts);
    write_svg_loglog(out_dir + "/tensor_vs_h.svg", "tensor entry T11 vs h", ten_pts);
}

static void write_study_csv(const StudyResult& result, const std::string& out_dir) {
    std::ofstream out(out_dir + "/study.csv");
    out << "h,dt,l1_error_at_T,edb_residual,entropy_initial,entropy_final,"
           "fisher_time_integral,c_kappa,aloc_max,tensor_probe_summary\n";
    for (const StudyRow& r : result.rows) {
        out << num(r.h) << "," << num(r.dt) << "," << num(r.l1_error_at_T) << ","
            << num(r.edb_residual) << "," << num(r.entropy_initial) << ","
            << num(r.entropy_final) << "," << num(r.fisher_time_integral) << ","
            << num(r.c_kappa) << "," << num(r.aloc_max) << ","
            << "T11:" << num(r.tensor_probe.a11) << ";T12:" << num(r.tensor_probe.a12)
            << ";T22:" << num(r.tensor_probe.a22) << "\n";
    }
}

static std::vector<Vec> default_probes(const Scenario& sc) {
    if (!sc.probe_centers.empty()) return sc.probe_centers;
    if (sc.builder == "mixed1d") return {Vec{-0.5, 0.0}, Vec{0.5, 0.0}};
    const double cx = 0.5 * sc.box_lengths[0];
    const double cy = 0.5 * (sc.box_lengths.size() > 1 ? sc.box_lengths[1] : 1.0);
    return {Vec{cx, cy}};
}

static Mat2 probe_average(const Scenario& sc, const MarkovData& md) {
    const TensorField field = local_tensor(*md.tess, md.kappa);
    const auto probes = default_probes(sc);
    Mat2 acc;
    for (const Vec& x : probes) {
        Box probe;
        for (int i = 0; i < md.tess->dim; ++i) {
            probe.lo[i] = x[i] - 0.5 * sc.probe_eps;
            probe.hi[i] = x[i] + 0.5 * sc.probe_eps;
        }
        acc += average_tensor(field, md.pi, probe, true);
    }
    return acc * (1.0 / static_cast<double>(probes.size()));
}

// --------------------------------------------------------------- studies ----

StudyResult run_check(const Scenario& sc, const std::string& out_dir, std::uint64_t seed) {
    fs::create_directories(out_dir);
    StudyResult result;
    result.name = sc.name;
    const auto V = make_potential(sc);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < sc.h_list.size(); ++i) {
        const double h = sc.h_list[i];
        const Tessellation t = build(sc, h, seed);
        const MarkovData md = make_data(sc, t, V);
        AssumptionReport rep = check_assumptions(t, md.pi, md.theta);
        rep.db_residual = check_detailed_balance(t, md.pi, md.kappa);
        const std::string rel = "assumptions_" + std::to_string(i) + ".json";
        std::ofstream(out_dir + "/" + rel) << rep.to_json() << "\n";
        files.push_back(rel);

        StudyRow row;
        row.h = t.h;
        row.c_kappa = rep.c_kappa;
        row.db_residual = rep.db_residual;
        for (const auto& [id, v] : rep.aloc_residual) row.aloc_max = std::max(row.aloc_max, v);
        result.rows.push_back(row);
        if (rep.db_residual > 1e-12)
            result.failures.push_back("detailed balance residual " + num(rep.db_residual) +
                                      " at h=" + num(h));
        const NondegeneracyReport nd = check_nondegeneracy(t, 0.0);
        if (!nd.pass || t.zeta <= 0.0)
            result.failures.push_back("degenerate tessellation at h=" + num(h));
    }
    result.pass = result.failures.empty();
    write_manifest(out_dir, files, {});
    return result;
}

StudyResult run_tensor(const Scenario& sc, const std::string& out_dir, std::uint64_t seed) {
    fs::create_directories(out_dir);
    StudyResult result;
    result.name = sc.name;
    const auto V = make_potential(sc);

    std::vector<Tessellation> tess;
    std::vector<MarkovData> data;
    tess.reserve(sc.h_list.size());
    for (double h : sc.h_list) tess.push_back(build(sc, h, seed));
    data.reserve(tess.size());
    for (std::size_t i = 0; i < tess.size(); ++i) data.push_back(make_data(sc, tess[i], V));

    const auto probes = default_probes(sc);
    std::ofstream csv(out_dir + "/probes.csv");
    csv << "probe_x,probe_y,eps,h,T11,T12,T21,T22,lambda_min,lambda_max,amin_residual\n";
    for (std::size_t i = 0; i < tess.size(); ++i) {
        StudyRow row;
        row.h = tess[i].h;
        row.tensor_probe = probe_average(sc, data[i]);
        result.rows.push_back(row);
        const TensorField field = local_tensor(tess[i], data[i].kappa);
        for (const Vec& x : probes) {
            Box probe;
            for (int k = 0; k < tess[i].dim; ++k) {
                probe.lo[k] = x[k] - 0.5 * sc.probe_eps;
                probe.hi[k] = x[k] + 0.5 * sc.probe_eps;
            }
            const Mat2 m = average_tensor(field, data[i].pi, probe, true);
            const auto ev = m.eigenvalues();
            Vec xi{1.0, tess[i].dim == 2 ? 0.5 : 0.0};
            double amin = 0.0;
            try {
                amin = amin_residual(tess[i], data[i].theta, x, xi, sc.probe_eps);
            } catch (const std::exception&) {
                amin = std::nan("");
            }
            csv << num(x[0]) << "," << num(x[1]) << "," << num(sc.probe_eps) << ","
                << num(tess[i].h) << "," << num(m.a11) << "," << num(m.a12) << ","
                << num(m.a12) << "," << num(m.a22) << ","
                << num(tess[i].dim == 1 ? m.a11 : ev[0]) << ","
                << num(tess[i].dim == 1 ? m.a11 : ev[1]) << "," << num(amin) << "\n";
        }
    }
    csv.close();

    if (tess.size() >= 3) {
        std::vector<TensorStudyInput> runs;
        for (std::size_t i = 0; i < tess.size(); ++i)
            runs.push_back({tess[i].h, &data[i]});
        const auto est = estimate_limit_tensor(runs, probes, sc.probe_eps, sc.c_zeta);
        std::ofstream ext(out_dir + "/tensor_extrapolated.csv");
        ext << "probe_x,probe_y,T11,T12,T22,lambda,Lambda,lambda_bound,Lambda_bound\n";
        for (const auto& pe : est)
            ext << num(pe.center[0]) << "," << num(pe.center[1]) << ","
                << num(pe.extrapolated.a11) << "," << num(pe.extrapolated.a12) << ","
                << num(pe.extrapolated.a22) << "," << num(pe.lambda) << ","
                << num(pe.Lambda) << "," << num(pe.lambda_bound) << ","
                << num(pe.Lambda_bound) << "\n";
        write_manifest(out_dir, {"probes.csv", "tensor_extrapolated.csv"}, {});
    } else {
        write_manifest(out_dir, {"probes.csv"},
                       {"tensor_extrapolated.csv omitted: fewer than 3 mesh levels"});
    }
    result.pass = true;
    return result;
}

static std::vector<double> reference_initial(const Scenario& sc, const ReferenceGrid& g,
                                             const Tessellation& finest,
                                             const std::function<double(const Vec&)>& V) {
    std::vector<double> rho(g.size());
    const double cellvol = std::pow(g.delta, g.dim);
    if (sc.initial == "equilibrium") {
        double z = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                rho[g.index(i, j)] = std::exp(-V(g.center(i, j)));
                z += rho[g.index(i, j)] * cellvol;
            }
        for (double& v : rho) v /= z;
        return rho;
    }
    if (sc.initial == "cell-indicator") {
        // indicator of the coarse cell, as a grid density
        const int id = finest.locate(sc.indicator_point);
        double z = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double v = finest.locate(g.center(i, j)) == id ? 1.0 : 1e-12;
                rho[g.index(i, j)] = v;
                z += v * cellvol;
            }
        for (double& v : rho) v /= z;
        return rho;
    }
    const auto f = make_initial_density(sc, finest);
    double z = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            rho[g.index(i, j)] = f(g.center(i, j));
            z += rho[g.index(i, j)] * cellvol;
        }
    for (double& v : rho) v /= z;
    return rho;
}

StudyResult run_scenario(const Scenario& sc, const std::string& out_dir, int jobs,
                         std::uint64_t seed) {
    (void)jobs;  // per-h runs are kept sequential for byte-identical outputs
    fs::create_directories(out_dir);
    StudyResult result;
    result.name = sc.name;
    const auto V = make_potential(sc);
    std::vector<std::string> files;
    std::vector<std::string> notes;

    std::vector<Tessellation> tess;
    std::vector<MarkovData> data;
    tess.reserve(sc.h_list.size());
    for (double h : sc.h_list) tess.push_back(build(sc, h, seed));
    data.reserve(tess.size());
    for (std::size_t i = 0; i < tess.size(); ++i) data.push_back(make_data(sc, tess[i], V));
    const Tessellation& finest = tess.back();

    // Limit-problem tensor from the finest-level probe average. The jump
    // process generates (1/2) div(T grad .) in the diffusive limit, so the
    // reference equation uses T/2.
    const Mat2 T_probe = probe_average(sc, data.back());
    LimitProblem prob;
    prob.dim = sc.dim;
    prob.V = V;
    prob.horizon = sc.horizon;
    if (sc.builder == "mixed1d") {
        prob.shape = LimitProblem::TensorShape::piecewise_1d;
        const TensorField field = local_tensor(finest, data.back().kappa);
        Box left{{-0.75, 0.0}, {-0.25, 0.0}}, right{{0.25, 0.0}, {0.75, 0.0}};
        prob.t_left = 0.5 * average_tensor(field, data.back().pi, left, true).a11;
        prob.t_right = 0.5 * average_tensor(field, data.back().pi, right, true).a11;
    } else {
        prob.shape = LimitProblem::TensorShape::constant;
        prob.tensor = T_probe * 0.5;
    }

    // Reference grid and solve
    double min_h = finest.h;
    Box dom;
    if (sc.dim == 1) {
        dom.lo = {finest.domain[0][0], 0.0};
        dom.hi = {finest.domain[1][0], 0.0};
    } else {
        dom.lo = dom.hi = finest.domain[0];
        for (const Vec& v : finest.domain) {
            dom.lo = {std::min(dom.lo[0], v[0]), std::min(dom.lo[1], v[1])};
            dom.hi = {std::max(dom.hi[0], v[0]), std::max(dom.hi[1], v[1])};
        }
    }
    double delta = sc.reference_delta;
    if (delta <= 0.0) {
        const double lx = dom.hi[0] - dom.lo[0];
        const int n = static_cast<int>(std::ceil(8.0 * lx / min_h));
        delta = lx / n;
    }
    const ReferenceGrid grid = make_grid(dom, sc.dim, delta);
    const auto rho_ref0 = reference_initial(sc, grid, finest, V);
    double ref_dt = sc.reference_dt;
    {
        const int n = std::max(1, static_cast<int>(std::ceil(sc.horizon / ref_dt)));
        ref_dt = sc.horizon / n;
    }
    const GridTrajectory ref = solve_limit_fp(prob, grid, rho_ref0, ref_dt);
    {
        std::ofstream gm(out_dir + "/grid.json");
        gm << "{\"delta\":" << num(grid.delta) << ",\"nx\":" << grid.nx
           << ",\"ny\":" << grid.ny << ",\"domain\":[[" << num(dom.lo[0]) << ","
           << num(dom.lo[1]) << "],[" << num(dom.hi[0]) << "," << num(dom.hi[1])
           << "]]}\n";
        files.push_back("grid.json");
        std::ofstream gt(out_dir + "/reference_final.csv");
        gt << "t,i,j,rho\n";
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                gt << num(ref.times.back()) << "," << i << "," << j << ","
                   << num(ref.densities.back()[grid.index(i, j)]) << "\n";
        files.push_back("reference_final.csv");
    }

    for (std::size_t i = 0; i < tess.size(); ++i) {
        const Tessellation& t = tess[i];
        const MarkovData& md = data[i];
        StudyRow row;
        row.h = t.h;
        row.dt = sc.dt_factor * t.h * t.h;
        {
            const int n = std::max(1, static_cast<int>(std::ceil(sc.horizon / row.dt)));
            row.dt = sc.horizon / n;
        }

        AssumptionReport rep = check_assumptions(t, md.pi, md.theta);
        rep.db_residual = check_detailed_balance(t, md.pi, md.kappa);
        row.c_kappa = rep.c_kappa;
        row.db_residual = rep.db_residual;
        for (const auto& [id, v] : rep.aloc_residual) row.aloc_max = std::max(row.aloc_max, v);
        const std::string arel = "assumptions_" + std::to_string(i) + ".json";
        std::ofstream(out_dir + "/" + arel) << rep.to_json() << "\n";
        files.push_back(arel);

        const DiscreteState rho0 = make_initial(sc, md);
        const Generator gen(md);
        const Trajectory traj = solve_fk(gen, rho0, sc.horizon, row.dt);
        const EdbAudit audit = audit_edb(traj);
        row.edb_residual = audit.edb_residual;
        row.mass_drift = audit.mass_drift;
        row.min_density = audit.min_density;
        row.entropy_monotone = audit.entropy_monotone;
        row.entropy_initial = energy(traj.states.front());
        row.entropy_final = energy(traj.states.back());
        for (std::size_t n = 0; n + 1 < traj.states.size(); ++n)
            row.fisher_time_integral +=
                0.5 * row.dt * (fisher(traj.states[n]) + fisher(traj.states[n + 1]));

        const PiecewiseConstantField lifted = lift_density(traj.states.back());
        row.l1_error_at_T = l1_error(lifted, grid, ref.densities.back());
        row.tensor_probe = probe_average(sc, md);

        if (sc.export_trajectories) {
            const std::string trel = "trajectory_" + std::to_string(i) + ".csv";
            std::ofstream tr(out_dir + "/" + trel);
            tr << "t,cell_id,rho,u\n";
            for (std::size_t n = 0; n < traj.states.size(); ++n)
                for (std::size_t k = 0; k < t.n_cells(); ++k)
                    tr << num(traj.times[n]) << "," << k << "," << num(traj.states[n].rho[k])
                       << "," << num(traj.states[n].rho[k] / md.pi.mass[k]) << "\n";
            files.push_back(trel);
            const std::string frel = "flux_" + std::to_string(i) + ".csv";
            std::ofstream fr(out_dir + "/" + frel);
            fr << "t_mid,k,l,j\n";
            for (std::size_t n = 0; n + 1 < traj.states.size(); ++n)
                for (std::size_t f = 0; f < t.n_faces(); ++f)
                    fr << num(0.5 * (traj.times[n] + traj.times[n + 1])) << ","
                       << t.faces[f].k << "," << t.faces[f].l << ","
                       << num(traj.fluxes[n].value[f]) << "\n";
            files.push_back(frel);
        }

        // hard invariants for the exit-code contract
        if (row.db_residual > 1e-12)
            result.failures.push_back("detailed balance residual " + num(row.db_residual) +
                                      " at h=" + num(row.h));
        if (row.mass_drift > 1e-12)
            result.failures.push_back("mass drift " + num(row.mass_drift) + " at h=" +
                                      num(row.h));
        if (row.edb_residual > sc.edb_bound)
            result.failures.push_back("EDB residual " + num(row.edb_residual) + " at h=" +
                                      num(row.h));
        if (row.min_density <= 0.0)
            result.failures.push_back("positivity lost at h=" + num(row.h));
        if (!row.entropy_monotone)
            result.failures.push_back("entropy not monotone at h=" + num(row.h));

        result.rows.push_back(row);
    }

    result.pass = result.failures.empty();
    write_study_csv(result, out_dir);
    files.push_back("study.csv");
    emit_plots(result, out_dir);
    for (const char* f : {"error_vs_h.dat", "edb_vs_dt.dat", "tensor_vs_h.dat",
                          "error_vs_h.svg", "edb_vs_dt.svg", "tensor_vs_h.svg"})
        files.push_back(f);
    if (!result.pass) {
        std::ostringstream os;
        os << "{\"failures\":[";
        for (std::size_t i = 0; i < result.failures.size(); ++i)
            os << (i ? "," : "") << "\"" << result.failures[i] << "\"";
        os << "]}\n";
        std::ofstream(out_dir + "/failures.json") << os.str();
        files.push_back("failures.json");
    }
    write_manifest(out_dir, files, notes);
    return result;
}

void replot_from_csv(const std::string& out_dir) {
    std::ifstream in(out_dir + "/study.csv");
    if (!in) throw std::invalid_argument("plot: no study.csv in " + out_dir);
    StudyResult result;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        StudyRow row;
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        if (cols.size() < 10) throw std::invalid_argument("plot: malformed study.csv row");
        row.h = std::stod(cols[0]);
        row.dt = std::stod(cols[1]);
        row.l1_error_at_T = std::stod(cols[2]);
        row.edb_residual = std::stod(cols[3]);
        row.entropy_initial = std::stod(cols[4]);
        row.entropy_final = std::stod(cols[5]);
        row.fisher_time_integral = std::stod(cols[6]);
        row.c_kappa = std::stod(cols[7]);
        row.aloc_max = std::stod(cols[8]);
        std::sscanf(cols[9].c_str(), "T11:%lf;T12:%lf;T22:%lf", &row.tensor_probe.a11,
                    &row.tensor_probe.a12, &row.tensor_probe.a22);
        result.rows.push_back(row);
    }
    emit_plots(result, out_dir);
}

}  // namespace ggf
