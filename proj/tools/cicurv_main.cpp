#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cicurv/brody.hpp"
#include "cicurv/config.hpp"
#include "cicurv/gauss.hpp"
#include "cicurv/germ.hpp"
#include "cicurv/jetspace.hpp"
#include "cicurv/peaks.hpp"
#include "cicurv/poly.hpp"

namespace {

using namespace cicurv;

[[noreturn]] void fail(const std::string& type, const std::string& message) {
    nlohmann::json e;
    e["error"] = type;
    e["message"] = message;
    std::cerr << e.dump() << "\n";
    std::exit(2);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file-not-found", "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream o(out_path);
        if (!o) fail("io-error", "cannot write " + out_path);
        o << text << "\n";
    }
}

Eigen::VectorXcd parse_point(const std::string& text) {
    std::vector<Complex> vals;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        double re = 0, im = 0;
        char comma = 0;
        std::stringstream ps(part);
        if (!(ps >> re)) fail("parse-error", "bad point component: " + part);
        if (ps >> comma >> im && comma != ',')
            fail("parse-error", "bad point component: " + part);
        vals.emplace_back(re, im);
    }
    if (vals.empty()) fail("parse-error", "empty point");
    Eigen::VectorXcd v(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
    return out;
}

PolynomialMap load_map(const std::string& path) {
    try {
        return PolynomialMap::from_json(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        fail("parse-error", std::string("malformed polynomial map JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature, jet-space and peak-section toolkit for complete intersections"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.read_env();
    std::string config_path, out_path;
    app.add_option("--config", config_path, "RunConfig JSON overriding the defaults");
    app.add_option("--out", out_path, "write the report here instead of stdout");

    // codim
    auto* codim = app.add_subcommand("codim", "jet-space codimension table");
    int cd_d = 1, cd_n = 3, cd_l = 1;
    bool cd_table = false, cd_text = false;
    std::string cd_locus;
    codim->add_option("--d", cd_d, "submanifold dimension")->required();
    codim->add_option("--n", cd_n, "ambient dimension")->required();
    codim->add_flag("--table", cd_table, "emit the full theorem-case table");
    codim->add_flag("--text", cd_text, "plain-text table instead of JSON");
    codim->add_option("--locus", cd_locus, "single locus name");
    codim->add_option("--l", cd_l, "exterior-power / tangency order");

    // curvature
    auto* curv = app.add_subcommand("curvature", "curvature values of a germ");
    std::string cv_map, cv_point, cv_vector;
    curv->add_option("--map", cv_map, "PolynomialMap JSON file")->required();
    curv->add_option("--point", cv_point, "base point re,im;re,im;...")->required();
    curv->add_option("--vector", cv_vector, "unit tangent vector in T-frame coords");

    // certify
    auto* cert = app.add_subcommand("certify", "negativity / positivity certifiers");
    std::string ct_map, ct_point, ct_kind, ct_bundle = "cotangent";
    int ct_restarts = 64, ct_l = 1;
    cert->add_option("--map", ct_map, "PolynomialMap JSON file")->required();
    cert->add_option("--point", ct_point, "base point")->required();
    cert->add_option("--kind", ct_kind, "ricci|scalar|holsec|holbisec|exterior")->required();
    cert->add_option("--restarts", ct_restarts, "multistart restarts");
    cert->add_option("--l", ct_l, "exterior power");
    cert->add_option("--bundle", ct_bundle, "cotangent|normal");

    // donaldson
    auto* don = app.add_subcommand("donaldson", "globalization sweep in the flat model");
    int dn_n = 1, dn_m = 1, dn_l = 1, dn_budget = 0;
    double dn_radius = 4.0, dn_D = 3.0, dn_eps1 = 0.1;
    std::uint64_t dn_seed = 1;
    std::string dn_oracle = "transversality", dn_csv;
    don->add_option("--n", dn_n)->required();
    don->add_option("--m", dn_m)->required();
    don->add_option("--l", dn_l)->required();
    don->add_option("--radius", dn_radius)->required();
    don->add_option("--D", dn_D)->required();
    don->add_option("--oracle", dn_oracle, "transversality|linetangency")->required();
    don->add_option("--seed", dn_seed)->required();
    don->add_option("--budget", dn_budget, "local avoidance sample budget");
    don->add_option("--eps1", dn_eps1, "first schedule entry");
    don->add_option("--csv", dn_csv, "also write margin-vs-radius CSV here");

    // brody
    auto* bro = app.add_subcommand("brody", "Brody reparametrization of a disk map");
    std::string br_map;
    int br_deg_max = 40;
    bro->add_option("--map", br_map, "DiskMap JSON (or univariate PolynomialMap)")->required();
    bro->add_option("--deg-max", br_deg_max, "series truncation degree");

    // linescan
    auto* lin = app.add_subcommand("linescan", "line tangency orders of a hypersurface");
    std::string ls_map, ls_point, ls_dir;
    int ls_l = 2, ls_restarts = 32;
    lin->add_option("--map", ls_map, "PolynomialMap JSON, m = 1")->required();
    lin->add_option("--point", ls_point)->required();
    lin->add_option("--l", ls_l, "tangency order of interest");
    lin->add_option("--direction", ls_dir, "single direction instead of the maximal scan");
    lin->add_option("--restarts", ls_restarts);

    // hyperbolic-experiment
    auto* hyp = app.add_subcommand("hyperbolic-experiment", "1/sqrt(k) derivative-bound data");
    std::string hx_scales = "4,9,16";
    std::uint64_t hx_seed = 1;
    int hx_budget = 6;
    bool hx_linear = false;
    hyp->add_option("--scales", hx_scales, "comma-separated scale parameters");
    hyp->add_option("--seed", hx_seed);
    hyp->add_option("--budget", hx_budget, "disks per scale");
    hyp->add_flag("--linear", hx_linear, "control run: section with a linear zero set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::ostringstream os;
        int rc = app.exit(e, os, os);
        (void)rc;
        fail("usage-error", os.str());
    }

    try {
        if (!config_path.empty()) cfg = RunConfig::from_json(read_file(config_path));
        cfg.read_env();

        if (*codim) {
            if (cd_table) {
                auto reports = jetspace::threshold_table(cd_d, cd_n);
                write_output(out_path, cd_text ? jetspace::reports_to_text(reports)
                                               : jetspace::reports_to_json(reports));
            } else {
                if (cd_locus.empty())
                    fail("usage-error", "codim: pass --table or --locus NAME");
                auto id = jetspace::LocusId::parse(cd_locus);
                if (cd_locus.find('(') == std::string::npos) id.l = cd_l;
                auto rep = jetspace::locus_codim(id, jetspace::JetSpec{cd_d, cd_n, 2});
                write_output(out_path, rep.to_json());
            }
        } else if (*curv) {
            Germ g(load_map(cv_map), parse_point(cv_point), cfg);
            nlohmann::json j;
            j["version"] = kVersion;
            j["d"] = g.d();
            j["n"] = g.n();
            j["scalar"] = scalar(g);
            if (!cv_vector.empty()) {
                Eigen::VectorXcd v = parse_point(cv_vector);
                j["ricci"] = ricci(g, v);
                j["holsec"] = holsec(g, v);
            }
            j["config"] = nlohmann::json::parse(cfg.to_json());
            write_output(out_path, j.dump(2));
        } else if (*cert) {
            Germ g(load_map(ct_map), parse_point(ct_point), cfg);
            if (ct_kind == "ricci") {
                write_output(out_path, certify_ricci_negative(g).to_json(cfg));
            } else if (ct_kind == "scalar") {
                write_output(out_path, certify_scalar_negative(g).to_json(cfg));
            } else if (ct_kind == "holsec") {
                write_output(out_path, certify_holsec_negative(g, ct_restarts).to_json(cfg));
            } else if (ct_kind == "holbisec") {
                write_output(out_path, certify_holbisec_negative(g, ct_restarts).to_json(cfg));
            } else if (ct_kind == "exterior") {
                nlohmann::json j;
                j["version"] = kVersion;
                j["bundle"] = ct_bundle;
                j["l"] = ct_l;
                if (ct_bundle == "cotangent") {
                    auto prof = gauss::kernel_profile(g, ct_l, ct_restarts);
                    auto imm = gauss::gauss_immersion_check(g, ct_l, 1e-4, false);
                    j["verdict"] = prof.max_kernel_dim < ct_l;
                    j["kernel_profile"] = nlohmann::json::parse(prof.to_json(cfg));
                    j["immersion_check"] = nlohmann::json::parse(imm.to_json(cfg));
                } else if (ct_bundle == "normal") {
                    auto imm = gauss::gauss_immersion_check(g, ct_l, 1e-4, true);
                    j["verdict"] = imm.immersion;
                    j["immersion_check"] = nlohmann::json::parse(imm.to_json(cfg));
                } else {
                    fail("usage-error", "certify: --bundle must be cotangent or normal");
                }
                j["config"] = nlohmann::json::parse(cfg.to_json());
                write_output(out_path, j.dump(2));
            } else {
                fail("usage-error", "certify: unknown --kind " + ct_kind);
            }
        } else if (*don) {
            if (dn_budget > 0) cfg.avoid_budget = dn_budget;
            cfg.seed = dn_seed;
            auto lat = peaks::discretize(dn_n, dn_radius);
            auto classes = peaks::color_classes(lat, dn_D);
            auto schedule =
                peaks::make_schedule(classes.count(), dn_eps1, cfg.peak_C, cfg.avoid_N0);
            std::unique_ptr<peaks::LocusOracle> oracle;
            if (dn_oracle == "transversality")
                oracle = std::make_unique<peaks::TransversalityOracle>();
            else if (dn_oracle == "linetangency")
                oracle = std::make_unique<peaks::LineTangencyOracle>(dn_l, 64, cfg.seed);
            else
                fail("usage-error", "donaldson: unknown oracle " + dn_oracle);
            auto rep = peaks::globalize(lat, *oracle, dn_D, schedule, dn_m, dn_l, cfg);
            write_output(out_path, rep.to_json(cfg));
            if (!dn_csv.empty()) {
                std::ofstream o(dn_csv);
                o << "radius,final_margin\n" << dn_radius << "," << rep.final_margin << "\n";
            }
        } else if (*bro) {
            brody::DiskMap f;
            std::string text = read_file(br_map);
            try {
                f = brody::DiskMap::from_json(text);
            } catch (const nlohmann::json::exception&) {
                PolynomialMap p = PolynomialMap::from_json(text);
                if (p.n() != 1) fail("usage-error", "brody: map must be univariate");
                f.m = p.m();
                f.c.assign(std::min(p.degree(), br_deg_max) + 1,
                           Eigen::VectorXcd::Zero(p.m()));
                for (const auto& t : p.terms())
                    if (t.alpha[0] <= br_deg_max) f.c[t.alpha[0]](t.j) = t.c;
            }
            auto [g, certificate] = brody::brody_reparametrize(f, 0.01, cfg);
            nlohmann::json j;
            j["certificate"] = nlohmann::json::parse(certificate.to_json(cfg));
            j["g"] = nlohmann::json::parse(g.to_json());
            write_output(out_path, j.dump(2));
        } else if (*lin) {
            PolynomialMap s = load_map(ls_map);
            Eigen::VectorXcd z = parse_point(ls_point);
            nlohmann::json j;
            j["version"] = kVersion;
            if (!ls_dir.empty()) {
                Eigen::VectorXcd b = parse_point(ls_dir);
                j["order"] = brody::line_tangency_order(s, z, b, cfg.zero_tol);
            } else {
                auto r = brody::max_line_tangency(s, z, ls_l, ls_restarts, cfg);
                j["order"] = r.order;
                j["sentinel"] = s.degree() + 1;
                j["margin"] = r.margin;
                nlohmann::json w = nlohmann::json::array();
                for (int i = 0; i < r.witness.size(); ++i)
                    w.push_back({{"re", r.witness(i).real()}, {"im", r.witness(i).imag()}});
                j["witness"] = w;
            }
            j["config"] = nlohmann::json::parse(cfg.to_json());
            write_output(out_path, j.dump(2));
        } else if (*hyp) {
            cfg.seed = hx_seed;
            cfg.grid_step = 0.5;
            std::vector<std::pair<double, peaks::PeakFamily>> fams;
            for (double k : parse_list(hx_scales)) {
                peaks::PeakFamily fam;
                fam.n = 2;
                fam.m = 1;
                fam.l = 1;
                fam.lattice = peaks::discretize(2, std::sqrt(k));
                fam.classes = peaks::color_classes(fam.lattice, 3.0);
                fam.H.assign(fam.lattice.points.size(), PolynomialMap(2, 1));
                if (hx_linear) {
                    // Control: one peak whose zero set is the line z2 = 0.
                    PolynomialMap h(2, 1);
                    h.add_term(0, {0, 1}, 1.0);
                    std::size_t center = 0;
                    for (std::size_t i = 0; i < fam.lattice.points.size(); ++i)
                        if (fam.lattice.points[i].norm() < fam.lattice.points[center].norm())
                            center = i;
                    fam.H[center] = h;
                } else {
                    std::mt19937_64 rng(hx_seed);
                    std::uniform_real_distribution<double> u(-0.2, 0.2);
                    for (auto& H : fam.H) {
                        H = PolynomialMap(2, 1);
                        for (const MultiIndex& a :
                             {MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{0, 1}})
                            H.add_term(0, a, Complex(u(rng), u(rng)));
                    }
                }
                fams.emplace_back(k, std::move(fam));
            }
            auto rows = brody::derivative_bound_experiment(fams, hx_budget, cfg);
            write_output(out_path, brody::experiment_to_csv(rows));
        }
    } catch (const std::invalid_argument& e) {
        fail("invalid-argument", e.what());
    } catch (const DegenerateGermError& e) {
        fail("degenerate-germ", e.what());
    } catch (const nlohmann::json::exception& e) {
        fail("parse-error", e.what());
    } catch (const std::exception& e) {
        fail("internal-error", e.what());
    }
    return 0;
}
