// tmono — command-line driver for the tensor-monopole library.
//
// Subcommands: spectrum, curvature, charge, locate, phase-diagram, validate.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"
#include "json.hpp"

#include "tmono/algebra.hpp"
#include "tmono/geometry.hpp"
#include "tmono/models.hpp"
#include "tmono/rng.hpp"
#include "tmono/sweep.hpp"
#include "tmono/topology.hpp"
#include "tmono/version.hpp"

using json = nlohmann::json;
using namespace tmono;

namespace {

// ---------------------------------------------------------------------------
// option bundles

struct CommonOpts {
    std::string model{"canonical"};
    std::vector<double> ejl{1, 1, 1};
    std::vector<double> ejr{1, 1, 1};
    double ec{1}, ngl{0.5}, ngr{0.5};
    double vl{1}, vr{1};
    double gx{1}, gy{1}, gz{1}, gw{1};
    std::vector<double> eps{0, 0, 0};
    bool main_text_signs{false};

    std::string out;
    std::uint64_t seed{0};
    int jobs{1};
    std::string format{"csv"};
};

struct SweepOpts {
    std::vector<std::string> axes;     // "name:min:max:count", 1 or 2
    std::vector<double> at{0, 0, 0, 0};  // fixed coordinates (x, y, z, w)
};

struct AxisSpec {
    std::string name;
    double lo{0}, hi{0};
    int count{0};
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--model", c.model, "Model family")
        ->check(CLI::IsMember({"canonical", "circuit", "tripledot"}))
        ->capture_default_str();
    sub->add_option("--ejl", c.ejl, "Circuit: left Josephson energies EJL1,EJL2,EJL3")
        ->delimiter(',')->expected(3);
    sub->add_option("--ejr", c.ejr, "Circuit: right Josephson energies")->delimiter(',')->expected(3);
    sub->add_option("--ec", c.ec, "Circuit: charging energy")->capture_default_str();
    sub->add_option("--ngl", c.ngl, "Circuit: left offset charge")->capture_default_str();
    sub->add_option("--ngr", c.ngr, "Circuit: right offset charge")->capture_default_str();
    sub->add_option("--vl", c.vl, "Triple dot: left direct coupling")->capture_default_str();
    sub->add_option("--vr", c.vr, "Triple dot: right direct coupling")->capture_default_str();
    sub->add_option("--gx", c.gx, "Triple dot: Gamma_x")->capture_default_str();
    sub->add_option("--gy", c.gy, "Triple dot: Gamma_y")->capture_default_str();
    sub->add_option("--gz", c.gz, "Triple dot: Gamma_z")->capture_default_str();
    sub->add_option("--gw", c.gw, "Triple dot: Gamma_w")->capture_default_str();
    sub->add_option("--eps", c.eps, "Triple dot: dot energies")->delimiter(',')->expected(3);
    sub->add_flag("--main-text-signs", c.main_text_signs,
                  "Triple dot: published main-text sign convention for Gamma_y/Gamma_w");
    sub->add_option("--out", c.out, "Output path (default: stdout)");
    sub->add_option("--seed", c.seed, "Random seed for Monte-Carlo surfaces")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_sweep(CLI::App* sub, SweepOpts& s) {
    sub->add_option("--axis", s.axes,
                    "Sweep axis as name:min:max:count (x|y|z|w); repeat for a 2D grid")
        ->expected(1, 2);
    sub->add_option("--at", s.at, "Fixed phase coordinates x,y,z,w")->delimiter(',')->expected(4);
}

Model build_model(const CommonOpts& c) {
    try {
        if (c.model == "canonical") return Model{CanonicalParams{}};
        if (c.model == "circuit") {
            CircuitParams p;
            p.ej_l = {c.ejl[0], c.ejl[1], c.ejl[2]};
            p.ej_r = {c.ejr[0], c.ejr[1], c.ejr[2]};
            p.e_c = c.ec;
            p.ng_l = c.ngl;
            p.ng_r = c.ngr;
            return Model{p};
        }
        TripleDotParams p;
        p.v_l = c.vl;
        p.v_r = c.vr;
        p.gamma_x = c.gx;
        p.gamma_y = c.gy;
        p.gamma_z = c.gz;
        p.gamma_w = c.gw;
        p.eps = {c.eps[0], c.eps[1], c.eps[2]};
        p.main_text_signs = c.main_text_signs;
        return Model{p};
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

json model_params_json(const CommonOpts& c) {
    json j{{"model", c.model}};
    if (c.model == "circuit") {
        j["ejl"] = c.ejl;
        j["ejr"] = c.ejr;
        j["ec"] = c.ec;
        j["ngl"] = c.ngl;
        j["ngr"] = c.ngr;
    } else if (c.model == "tripledot") {
        j["vl"] = c.vl;
        j["vr"] = c.vr;
        j["gamma"] = {c.gx, c.gy, c.gz, c.gw};
        j["eps"] = c.eps;
        j["main_text_signs"] = c.main_text_signs;
    }
    return j;
}

AxisSpec parse_axis(const std::string& s, const std::vector<std::string>& allowed) {
    std::stringstream ss(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 4) throw ConfigError("axis spec '" + s + "' is not name:min:max:count");
    AxisSpec a;
    a.name = parts[0];
    if (std::find(allowed.begin(), allowed.end(), a.name) == allowed.end())
        throw ConfigError("axis name '" + a.name + "' is not one of the sweepable axes");
    try {
        a.lo = std::stod(parts[1]);
        a.hi = std::stod(parts[2]);
        a.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw ConfigError("axis spec '" + s + "' has non-numeric fields");
    }
    if (a.count < 2) throw ConfigError("axis '" + a.name + "' needs count >= 2");
    return a;
}

Axis axis_from_name(const std::string& n) {
    if (n == "x") return Axis::X;
    if (n == "y") return Axis::Y;
    if (n == "z") return Axis::Z;
    if (n == "w") return Axis::W;
    throw ConfigError("unknown phase axis '" + n + "'");
}

double axis_value(const AxisSpec& a, int i) {
    return a.lo + (a.hi - a.lo) * static_cast<double>(i) / (a.count - 1);
}

// ---------------------------------------------------------------------------
// output plumbing

using Cell = std::optional<double>;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_output(const CommonOpts& c, const std::string& command, const json& params,
                  const Table* table, const json* record, double wall_s) {
    std::string body;
    if (c.format == "csv" && table) {
        std::ostringstream os;
        for (std::size_t i = 0; i < table->columns.size(); ++i)
            os << (i ? "," : "") << table->columns[i];
        os << "\n";
        for (const auto& row : table->rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ",";
                if (row[i]) os << format_number(*row[i]);
            }
            os << "\n";
        }
        body = os.str();
    } else {
        json j;
        if (table) {
            j["columns"] = table->columns;
            json rows = json::array();
            for (const auto& row : table->rows) {
                json r = json::array();
                for (const auto& cell : row)
                    r.push_back(cell ? json(*cell) : json(nullptr));
                rows.push_back(std::move(r));
            }
            j["rows"] = std::move(rows);
        }
        if (record) j.update(*record);
        body = j.dump(2) + "\n";
    }

    json manifest{{"tool", "tmono"},
                  {"version", kVersionString},
                  {"command", command},
                  {"parameters", params},
                  {"seed", c.seed},
                  {"jobs", c.jobs},
                  {"format", c.format},
                  {"wall_time_s", wall_s}};

    if (c.out.empty()) {
        std::cout << body;
        return;
    }
    {
        std::ofstream f(c.out);
        if (!f) throw ConfigError("cannot open output file '" + c.out + "'");
        f << body;
    }
    std::ofstream mf(c.out + ".manifest.json");
    if (!mf) throw ConfigError("cannot open manifest file '" + c.out + ".manifest.json'");
    mf << manifest.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// subcommands

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

PhasePoint grid_point(const SweepOpts& s, const std::vector<AxisSpec>& axes, std::int64_t idx) {
    PhasePoint pt{s.at[0], s.at[1], s.at[2], s.at[3]};
    if (axes.size() == 1) {
        pt = pt.shifted(axis_from_name(axes[0].name),
                        axis_value(axes[0], static_cast<int>(idx)) - pt[axis_from_name(axes[0].name)]);
    } else {
        const int j = static_cast<int>(idx % axes[1].count);
        const int i = static_cast<int>(idx / axes[1].count);
        const Axis a0 = axis_from_name(axes[0].name);
        const Axis a1 = axis_from_name(axes[1].name);
        pt = pt.shifted(a0, axis_value(axes[0], i) - pt[a0]);
        pt = pt.shifted(a1, axis_value(axes[1], j) - pt[a1]);
    }
    return pt;
}

int cmd_spectrum(const CommonOpts& c, const SweepOpts& s) {
    Timer timer;
    const Model m = build_model(c);
    std::vector<AxisSpec> axes;
    for (const auto& a : s.axes) axes.push_back(parse_axis(a, {"x", "y", "z", "w"}));
    if (axes.empty()) throw ConfigError("spectrum needs at least one --axis");

    std::int64_t total = axes[0].count;
    if (axes.size() == 2) total *= axes[1].count;

    Table t;
    for (const auto& a : axes) t.columns.push_back("phi_" + a.name);
    t.columns.insert(t.columns.end(), {"E_minus", "E_0", "E_plus"});
    t.rows.resize(static_cast<std::size_t>(total));

    parallel_for(total, c.jobs, [&](std::int64_t idx) {
        const PhasePoint pt = grid_point(s, axes, idx);
        const EigenSystem3 es = eigh3(m.hamiltonian(pt));
        auto& row = t.rows[static_cast<std::size_t>(idx)];
        if (axes.size() == 2) {
            row.push_back(axis_value(axes[0], static_cast<int>(idx / axes[1].count)));
            row.push_back(axis_value(axes[1], static_cast<int>(idx % axes[1].count)));
        } else {
            row.push_back(axis_value(axes[0], static_cast<int>(idx)));
        }
        for (double e : es.values) row.push_back(e);
    });

    json params = model_params_json(c);
    params["axes"] = s.axes;
    params["at"] = s.at;
    write_output(c, "spectrum", params, &t, nullptr, timer.seconds());
    return 0;
}

struct CurvatureOpts {
    std::string component{"xyz"};
    double h_outer{1e-3}, h_inner{1e-3};
};

int cmd_curvature(const CommonOpts& c, const SweepOpts& s, const CurvatureOpts& co) {
    Timer timer;
    const Model m = build_model(c);
    if (co.component.size() != 3) throw ConfigError("--component needs three axis letters, e.g. xyz");
    const Axis mu = axis_from_name(co.component.substr(0, 1));
    const Axis nu = axis_from_name(co.component.substr(1, 1));
    const Axis la = axis_from_name(co.component.substr(2, 1));

    std::vector<AxisSpec> axes;
    for (const auto& a : s.axes) axes.push_back(parse_axis(a, {"x", "y", "z", "w"}));
    if (axes.empty()) throw ConfigError("curvature needs at least one --axis");

    std::int64_t total = axes[0].count;
    if (axes.size() == 2) total *= axes[1].count;

    Table t;
    for (const auto& a : axes) t.columns.push_back("phi_" + a.name);
    t.columns.push_back("H_" + co.component);
    t.rows.resize(static_cast<std::size_t>(total));

    parallel_for(total, c.jobs, [&](std::int64_t idx) {
        const PhasePoint pt = grid_point(s, axes, idx);
        auto& row = t.rows[static_cast<std::size_t>(idx)];
        if (axes.size() == 2) {
            row.push_back(axis_value(axes[0], static_cast<int>(idx / axes[1].count)));
            row.push_back(axis_value(axes[1], static_cast<int>(idx % axes[1].count)));
        } else {
            row.push_back(axis_value(axes[0], static_cast<int>(idx)));
        }
        try {
            row.push_back(tensor_curvature(m, pt, mu, nu, la, co.h_outer, co.h_inner));
        } catch (const DegeneracyTooClose&) {
            row.push_back(std::nullopt);  // inside the gap_min neighborhood
        } catch (const DegenerateGroundState&) {
            row.push_back(std::nullopt);
        }
    });

    json params = model_params_json(c);
    params["axes"] = s.axes;
    params["at"] = s.at;
    params["component"] = co.component;
    params["h_outer"] = co.h_outer;
    params["h_inner"] = co.h_inner;
    write_output(c, "curvature", params, &t, nullptr, timer.seconds());
    return 0;
}

int cmd_locate(const CommonOpts& c) {
    Timer timer;
    const Model m = build_model(c);
    const auto pts = locate_monopoles(m);

    Table t;
    t.columns = {"phi_x", "phi_y", "phi_z", "phi_w", "s1", "s2", "residual"};
    for (const auto& d : pts)
        t.rows.push_back({d.point.x, d.point.y, d.point.z, d.point.w,
                          static_cast<double>(d.s1), static_cast<double>(d.s2), d.residual});

    write_output(c, "locate", model_params_json(c), &t, nullptr, timer.seconds());
    return 0;
}

struct ChargeCmdOpts {
    std::vector<double> center;
    int monopole{-1};
    std::string surface{"cube"};
    double half_width{0.3};
    double radius{0.2};
    int nodes{12};
    int samples{20000};
    double h_outer{1e-3}, h_inner{1e-3};
};

const char* method_name(ChargeMethod m) {
    switch (m) {
        case ChargeMethod::CubeQuadrature: return "cube-quadrature";
        case ChargeMethod::CubeMonteCarlo: return "cube-montecarlo";
        default: return "sphere-montecarlo";
    }
}

int cmd_charge(const CommonOpts& c, const ChargeCmdOpts& ch) {
    Timer timer;
    const Model m = build_model(c);

    PhasePoint center{};
    if (!ch.center.empty()) {
        if (ch.center.size() != 4) throw ConfigError("--center needs four coordinates x,y,z,w");
        center = PhasePoint{ch.center[0], ch.center[1], ch.center[2], ch.center[3]};
    } else if (ch.monopole >= 0) {
        const auto pts = locate_monopoles(m);
        if (ch.monopole >= static_cast<int>(pts.size()))
            throw ConfigError("--monopole index out of range (located " +
                              std::to_string(pts.size()) + ")");
        center = pts[static_cast<std::size_t>(ch.monopole)].point;
    } else if (m.is_canonical()) {
        center = PhasePoint{0, 0, 0, 0};
    } else {
        throw ConfigError("charge needs --center or --monopole for this model");
    }

    ChargeOptions opt;
    opt.h_outer = ch.h_outer;
    opt.h_inner = ch.h_inner;
    opt.jobs = c.jobs;

    ChargeResult r;
    if (ch.surface == "cube")
        r = dd_charge_cube(m, center, ch.half_width, ch.nodes, ChargeMethod::CubeQuadrature, c.seed, opt);
    else if (ch.surface == "cube-mc")
        r = dd_charge_cube(m, center, ch.half_width, ch.samples, ChargeMethod::CubeMonteCarlo, c.seed, opt);
    else
        r = dd_charge_sphere(m, center, ch.radius, ch.samples, c.seed, opt);

    json record{{"q_value", r.q_value},
                {"q_rounded", r.q_rounded},
                {"error_estimate", r.error_estimate},
                {"method", method_name(r.method)},
                {"evaluations", r.evaluations},
                {"surface_parameter", r.surface_parameter},
                {"center", {center.x, center.y, center.z, center.w}}};

    json params = model_params_json(c);
    params["surface"] = ch.surface;
    params["half_width"] = ch.half_width;
    params["radius"] = ch.radius;
    params["nodes"] = ch.nodes;
    params["samples"] = ch.samples;
    params["h_outer"] = ch.h_outer;
    params["h_inner"] = ch.h_inner;

    if (c.format == "csv") {
        Table t;
        t.columns = {"q_value", "q_rounded", "error_estimate", "evaluations", "surface_parameter"};
        t.rows.push_back({r.q_value, static_cast<double>(r.q_rounded), r.error_estimate,
                          static_cast<double>(r.evaluations), r.surface_parameter});
        write_output(c, "charge", params, &t, nullptr, timer.seconds());
    } else {
        write_output(c, "charge", params, nullptr, &record, timer.seconds());
    }
    return 0;
}

const char* tag_name(RegionTag t) {
    switch (t) {
        case RegionTag::Topological: return "topological";
        case RegionTag::Gapped: return "gapped";
        default: return "critical";
    }
}

struct PhaseDiagramOpts {
    std::vector<std::string> axes;  // two specs named a and b (coupling ratios)
};

int cmd_phase_diagram(const CommonOpts& c, const PhaseDiagramOpts& pd) {
    Timer timer;
    if (c.model == "canonical")
        throw ConfigError("phase-diagram applies to the circuit and tripledot models");
    if (pd.axes.size() != 2)
        throw ConfigError("phase-diagram needs two --axis specs named a and b "
                          "(circuit: EJL2/EJL1, EJL3/EJL1; tripledot: vL/Gamma, vR/Gamma)");
    const AxisSpec aa = parse_axis(pd.axes[0], {"a", "b"});
    const AxisSpec ab = parse_axis(pd.axes[1], {"a", "b"});
    if (aa.name == ab.name) throw ConfigError("phase-diagram axes must be distinct");

    Table t;
    t.columns = {aa.name, ab.name, "left_tag", "left_margin", "right_tag", "right_margin"};
    // tags are strings; keep a parallel store and emit via a string table
    struct Row {
        double a, b, ml, mr;
        RegionTag tl, tr;
    };
    std::vector<Row> rows(static_cast<std::size_t>(aa.count) * ab.count);

    parallel_for(static_cast<std::int64_t>(rows.size()), c.jobs, [&](std::int64_t idx) {
        const int i = static_cast<int>(idx / ab.count);
        const int j = static_cast<int>(idx % ab.count);
        const double ra = axis_value(aa, i);
        const double rb = axis_value(ab, j);
        CommonOpts cc = c;
        if (c.model == "circuit") {
            // ratios scale the left junction energies EJL2/EJL1, EJL3/EJL1
            cc.ejl = {c.ejl[0], ra * c.ejl[0], rb * c.ejl[0]};
        } else {
            // ratios set vL/Gamma and vR/Gamma at Gamma = gx
            cc.vl = ra * c.gx;
            cc.vr = rb * c.gx;
        }
        const auto [left, right] = classify_region(build_model(cc));
        rows[static_cast<std::size_t>(idx)] = {ra, rb, left.margin, right.margin, left.tag, right.tag};
    });

    // phase-diagram emits its own CSV because two columns are categorical
    std::ostringstream os;
    json jrows = json::array();
    os << aa.name << "," << ab.name << ",left_tag,left_margin,right_tag,right_margin\n";
    for (const auto& r : rows) {
        os << format_number(r.a) << "," << format_number(r.b) << "," << tag_name(r.tl) << ","
           << format_number(r.ml) << "," << tag_name(r.tr) << "," << format_number(r.mr) << "\n";
        jrows.push_back({r.a, r.b, tag_name(r.tl), r.ml, tag_name(r.tr), r.mr});
    }

    json params = model_params_json(c);
    params["axes"] = pd.axes;
    if (c.format == "csv") {
        CommonOpts cc = c;
        if (cc.out.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream f(cc.out);
            if (!f) throw ConfigError("cannot open output file '" + cc.out + "'");
            f << os.str();
            json manifest{{"tool", "tmono"},       {"version", kVersionString},
                          {"command", "phase-diagram"}, {"parameters", params},
                          {"seed", c.seed},        {"jobs", c.jobs},
                          {"format", c.format},    {"wall_time_s", timer.seconds()}};
            std::ofstream mf(cc.out + ".manifest.json");
            mf << manifest.dump(2) << "\n";
        }
    } else {
        json record{{"columns", t.columns}, {"rows", jrows}};
        write_output(c, "phase-diagram", params, nullptr, &record, timer.seconds());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// validate

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

int cmd_validate(const CommonOpts& c, const std::string& level) {
    Timer timer;
    if (level != "quick" && level != "full") throw ConfigError("--level must be quick or full");
    std::vector<Check> checks;
    auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({name, ok, detail});
        std::cout << (ok ? "ok   " : "FAIL ") << name << "  " << detail << "\n";
    };

    const Model canonical{CanonicalParams{}};
    ChargeOptions copt;
    copt.jobs = c.jobs;

    {  // quantization on the canonical monopole
        const auto r = dd_charge_cube(canonical, PhasePoint{0, 0, 0, 0}, 0.5, 8,
                                      ChargeMethod::CubeQuadrature, c.seed, copt);
        std::ostringstream d;
        d << "Q=" << r.q_value << " err=" << r.error_estimate;
        add("canonical-quantization", std::abs(r.q_value - 1.0) <= 0.02, d.str());
    }

    {  // analytic oracle equivalence at random canonical points
        const int npts = level == "full" ? 20 : 5;
        double worst = 0;
        for (int i = 0; i < npts; ++i) {
            std::array<double, 4> q{};
            double nn = 0;
            for (int k = 0; k < 4; ++k) {
                q[k] = counter_gaussian(c.seed + 17, static_cast<std::uint64_t>(i),
                                        static_cast<std::uint64_t>(k));
                nn += q[k] * q[k];
            }
            const double target = 0.5 + 1.5 * counter_uniform(c.seed + 17, static_cast<std::uint64_t>(i), 9);
            const double fac = target / std::sqrt(nn);
            for (double& v : q) v *= fac;
            const PhasePoint pt{q[0], q[1], q[2], q[3]};
            const double num = tensor_curvature(canonical, pt, Axis::X, Axis::Y, Axis::Z);
            const double ana =
                analytic_curvature_canonical(QVector{q[0], q[1], q[2], q[3]}, Axis::X, Axis::Y, Axis::Z);
            worst = std::max(worst, std::abs(num - ana) / std::max(std::abs(ana), 1e-12));
        }
        std::ostringstream d;
        d << "worst rel=" << worst << " over " << npts << " points";
        add("analytic-oracle-equivalence", worst <= 1e-3, d.str());
    }

    {  // gauge invariance on the circuit model
        const Model m{CircuitParams{}};
        GeometryOptions base;
        base.force_eigensolver = true;
        GeometryOptions gauged = base;
        gauged.gauge = [](const PhasePoint& p) { return 0.7 * p.x + 0.3 * std::sin(p.y); };
        const int npts = level == "full" ? 10 : 4;
        double worst = 0;
        for (int i = 0; i < npts; ++i) {
            const PhasePoint pt{0.5 + 0.31 * i, -0.4 + 0.23 * i, 1.1 - 0.17 * i, 0.3 + 0.29 * i};
            const double a = tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z, 1e-3, 1e-3, base);
            const double b = tensor_curvature(m, pt, Axis::X, Axis::Y, Axis::Z, 1e-3, 1e-3, gauged);
            worst = std::max(worst, std::abs(a - b));
        }
        std::ostringstream d;
        d << "worst abs diff=" << worst << " over " << npts << " points";
        add("gauge-invariance", worst <= 1e-6, d.str());
    }

    {  // truncation convergence of the full circuit Hamiltonian in the cutoff
        CircuitParams p;
        p.ej_l = {0.02, 0.02, 0.02};
        p.ej_r = {0.02, 0.02, 0.02};
        const PhasePoint pt{0.7, -0.3, 0.4, 1.1};
        auto low3 = [&](int cutoff) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(circuit_full_h(p, pt, cutoff));
            return std::array<double, 3>{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
        };
        const auto a3 = low3(3);
        const auto b6 = low3(6);
        double worst = 0;
        for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(a3[k] - b6[k]));
        std::ostringstream d;
        d << "max eigenvalue shift cutoff 3->6 = " << worst << " (E_C units)";
        add("truncation-convergence", worst <= 1e-8 * p.e_c, d.str());
    }

    {  // monopole charge quantization on a physical model
        const Model m{CircuitParams{}};
        const auto pts = locate_monopoles(m);
        bool ok = pts.size() == 4;
        double q0 = 0;
        if (ok) {
            const auto r = dd_charge_cube(m, pts[0].point, 0.3, 8, ChargeMethod::CubeQuadrature,
                                          c.seed, copt);
            q0 = r.q_value;
            ok = std::abs(q0 - (-pts[0].s1 * pts[0].s2)) <= 0.02;
        }
        std::ostringstream d;
        d << "located " << pts.size() << " monopoles, first charge=" << q0;
        add("circuit-quantization", ok, d.str());
    }

    {  // surface independence
        const Model m{CircuitParams{}};
        const auto pts = locate_monopoles(m);
        const auto r1 = dd_charge_cube(m, pts[0].point, 0.3, 8, ChargeMethod::CubeQuadrature, c.seed, copt);
        const auto r2 = dd_charge_cube(m, pts[0].point, 0.15, 8, ChargeMethod::CubeQuadrature, c.seed, copt);
        const auto r3 = dd_charge_sphere(m, pts[0].point, 0.2, level == "full" ? 20000 : 4000,
                                         c.seed, copt);
        auto agree = [](const ChargeResult& a, const ChargeResult& b) {
            return std::abs(a.q_value - b.q_value) <= 3.0 * (a.error_estimate + b.error_estimate);
        };
        std::ostringstream d;
        d << "cube(0.3)=" << r1.q_value << " cube(0.15)=" << r2.q_value << " sphere(0.2)=" << r3.q_value;
        add("surface-independence", agree(r1, r2) && agree(r1, r3) && agree(r2, r3), d.str());
    }

    if (level == "full") {
        {  // Monte-Carlo error scaling over a decade of samples
            const auto r1 = dd_charge_cube(canonical, PhasePoint{0, 0, 0, 0}, 0.5, 2000,
                                           ChargeMethod::CubeMonteCarlo, c.seed, copt);
            const auto r2 = dd_charge_cube(canonical, PhasePoint{0, 0, 0, 0}, 0.5, 20000,
                                           ChargeMethod::CubeMonteCarlo, c.seed, copt);
            const double ratio = r1.error_estimate / r2.error_estimate;
            const double expect = std::sqrt(10.0);
            std::ostringstream d;
            d << "stderr ratio over decade=" << ratio << " (expect ~" << expect << ")";
            add("montecarlo-error-scaling", ratio >= expect / 1.5 && ratio <= expect * 1.5, d.str());
        }
        {  // second-order convergence of the curvature stencils
            const PhasePoint pt{0.3, 0.2, 0.5, 0.1};
            const double ana =
                analytic_curvature_canonical(QVector{0.3, 0.2, 0.5, 0.1}, Axis::X, Axis::Y, Axis::Z);
            const double e1 = std::abs(
                tensor_curvature(canonical, pt, Axis::X, Axis::Y, Axis::Z, 2e-3, 2e-3) - ana);
            const double e2 = std::abs(
                tensor_curvature(canonical, pt, Axis::X, Axis::Y, Axis::Z, 1e-3, 1e-3) - ana);
            const double fac = e1 / e2;
            std::ostringstream d;
            d << "error factor on halving steps=" << fac;
            add("convergence-order", fac >= 2.5 && fac <= 6.0, d.str());
        }
    }

    const bool all_ok =
        std::all_of(checks.begin(), checks.end(), [](const Check& ch) { return ch.ok; });
    std::cout << (all_ok ? "validate: all checks passed" : "validate: FAILURES present") << "\n";

    if (!c.out.empty()) {
        json report{{"level", level}, {"passed", all_ok}, {"wall_time_s", timer.seconds()}};
        json items = json::array();
        for (const auto& ch : checks)
            items.push_back({{"name", ch.name}, {"ok", ch.ok}, {"detail", ch.detail}});
        report["checks"] = items;
        std::ofstream f(c.out);
        if (!f) throw ConfigError("cannot open output file '" + c.out + "'");
        f << report.dump(2) << "\n";
        json manifest{{"tool", "tmono"},   {"version", kVersionString}, {"command", "validate"},
                      {"parameters", json{{"level", level}}}, {"seed", c.seed},
                      {"jobs", c.jobs},    {"wall_time_s", timer.seconds()}};
        std::ofstream mf(c.out + ".manifest.json");
        mf << manifest.dump(2) << "\n";
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tensor monopoles in 4D phase space: spectra, tensor Berry curvature, "
                 "and Dixmier-Douady charges for three-level chiral models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file mirroring the flags; flags override");

    CommonOpts common;
    SweepOpts sweep_spectrum, sweep_curvature;
    CurvatureOpts curvopts;
    ChargeCmdOpts chargeopts;
    PhaseDiagramOpts pdopts;
    std::string validate_level{"quick"};

    auto* sp = app.add_subcommand("spectrum", "Eigenvalue sweep over a phase-space grid");
    add_common(sp, common);
    add_sweep(sp, sweep_spectrum);

    auto* cv = app.add_subcommand("curvature", "Tensor Berry curvature sweep");
    add_common(cv, common);
    add_sweep(cv, sweep_curvature);
    cv->add_option("--component", curvopts.component, "Curvature component, three of x|y|z|w")
        ->capture_default_str();
    cv->add_option("--h-outer", curvopts.h_outer, "Outer finite-difference step")->capture_default_str();
    cv->add_option("--h-inner", curvopts.h_inner, "Inner finite-difference step")->capture_default_str();

    auto* ch = app.add_subcommand("charge", "Dixmier-Douady charge of an enclosed degeneracy");
    add_common(ch, common);
    ch->add_option("--center", chargeopts.center, "Surface center x,y,z,w")->delimiter(',')->expected(4);
    ch->add_option("--monopole", chargeopts.monopole, "Use the i-th located monopole as center");
    ch->add_option("--surface", chargeopts.surface, "Integration surface")
        ->check(CLI::IsMember({"cube", "cube-mc", "sphere"}))->capture_default_str();
    ch->add_option("--half-width", chargeopts.half_width, "Cube half-width (rad)")->capture_default_str();
    ch->add_option("--radius", chargeopts.radius, "Sphere radius (rad)")->capture_default_str();
    ch->add_option("--nodes", chargeopts.nodes, "Quadrature nodes per face axis")->capture_default_str();
    ch->add_option("--samples", chargeopts.samples, "Monte-Carlo samples")->capture_default_str();
    ch->add_option("--h-outer", chargeopts.h_outer, "Outer finite-difference step")->capture_default_str();
    ch->add_option("--h-inner", chargeopts.h_inner, "Inner finite-difference step")->capture_default_str();

    auto* lo = app.add_subcommand("locate", "Locate the triply degenerate points");
    add_common(lo, common);

    auto* pd = app.add_subcommand("phase-diagram", "Topological/gapped classification over coupling ratios");
    add_common(pd, common);
    pd->add_option("--axis", pdopts.axes,
                   "Ratio axis as name:min:max:count with names a,b "
                   "(circuit: EJL2/EJL1, EJL3/EJL1; tripledot: vL/Gamma, vR/Gamma)")
        ->expected(2);

    auto* va = app.add_subcommand("validate", "Run the numerical validation suites");
    add_common(va, common);
    va->add_option("--level", validate_level, "Suite size: quick or full")->capture_default_str();

    // allow [section]-style config files to select and configure a subcommand
    for (auto* sub : {sp, cv, ch, lo, pd, va}) sub->configurable();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sp->parsed()) return cmd_spectrum(common, sweep_spectrum);
        if (cv->parsed()) return cmd_curvature(common, sweep_curvature, curvopts);
        if (ch->parsed()) return cmd_charge(common, chargeopts);
        if (lo->parsed()) return cmd_locate(common);
        if (pd->parsed()) return cmd_phase_diagram(common, pdopts);
        if (va->parsed()) return cmd_validate(common, validate_level);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const NotChiralRegime& e) {
        // wrong model family or parameters for the requested operation
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
