#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nervekit/extension.hpp"
#include "nervekit/gromov_hausdorff.hpp"
#include "nervekit/homotopy.hpp"
#include "nervekit/json_io.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/model_space.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/realization.hpp"
#include "nervekit/verify.hpp"

namespace nk = nervekit;
using nk::json;

namespace {

nk::json lipschitz_to_json(const nk::LipschitzReport& r) {
    json j;
    j["map"] = r.map_id;
    j["lipschitz"] = r.lipschitz;
    j["witness"] = {r.witness_a, r.witness_b};
    j["metric"] = r.metric;
    j["pairs"] = r.pairs;
    j["subsampled"] = r.subsampled;
    return j;
}

// Good-covering ball condition: every open eps-ball around a sample fits in
// some element, checked exhaustively on samples.
bool ball_condition(const nk::Covering& cov, int* witness) {
    const nk::FiniteMetricSpace& X = *cov.space;
    for (int x = 0; x < X.size(); ++x) {
        bool housed = false;
        for (int j = 0; j < cov.n_elements() && !housed; ++j) {
            bool fits = true;
            for (int y = 0; y < X.size() && fits; ++y)
                if (X.dist(x, y) < cov.scale && !cov.contains(j, y)) fits = false;
            housed = fits;
        }
        if (!housed) {
            if (witness) *witness = x;
            return false;
        }
    }
    return true;
}

json covering_report(const nk::Covering& cov, const nk::FiniteMetricSpace& X) {
    json j;
    j["n_elements"] = cov.n_elements();
    j["radius"] = cov.radius;
    j["scale"] = cov.scale;
    j["L_point"] = cov.max_point_overlap();
    j["L_pairwise"] = cov.max_pairwise_overlap();
    int witness = -1;
    j["ball_condition_ok"] = ball_condition(cov, &witness);
    if (witness >= 0) j["ball_condition_witness"] = witness;
    std::vector<int> D = nk::doubling_constant(X, {8.0 * cov.scale});
    j["doubling_8eps"] = D[0];
    j["overlap_vs_doubling_ok"] = cov.max_pairwise_overlap() <= D[0] * D[0];
    return j;
}

int cmd_gen(const std::string& kind, int n, std::uint64_t seed, double radius, double jitter,
            double a, double b, int nu, int nv, double length, const std::string& out) {
    nk::ModelSpace M;
    switch (nk::kind_from_name(kind)) {
        case nk::ModelKind::circle: M = nk::generate_circle(radius, n, jitter, seed); break;
        case nk::ModelKind::sphere: M = nk::generate_sphere(radius, n); break;
        case nk::ModelKind::flat_torus: M = nk::generate_flat_torus(a, b, nu, nv); break;
        case nk::ModelKind::interval: M = nk::generate_interval(length, n); break;
    }
    nk::write_text_file(out, nk::dump_deterministic(nk::model_to_json(M)));
    std::cout << "wrote " << out << " (" << M.n << " samples)\n";
    return 0;
}

int cmd_cover(const std::string& space_path, double eps, std::uint64_t seed, const std::string& out) {
    nk::LoadedSpace L = nk::load_space_file(space_path);
    nk::Covering cov = nk::build_ball_covering(L.space, eps, seed);
    nk::write_text_file(out, nk::dump_deterministic(nk::covering_to_json(cov)));
    std::cout << "wrote " << out << " (" << cov.n_elements() << " elements)\n";
    return 0;
}

int cmd_nerve(const std::string& space_path, const std::string& cov_path, int max_dim,
              const std::string& out) {
    nk::LoadedSpace L = nk::load_space_file(space_path);
    nk::Covering cov = nk::load_covering(nk::read_json_file(cov_path), L.space);
    nk::NerveComplex K = nk::build_nerve(cov, max_dim);
    nk::write_text_file(out, nk::dump_deterministic(nk::complex_to_json(K)));
    std::cout << "wrote " << out << " (" << K.size() << " simplices)\n";
    return 0;
}

int cmd_verify(const std::string& space_path, const std::string& cov_path) {
    nk::LoadedSpace L = nk::load_space_file(space_path);  // validates the metric
    json j;
    j["metric_ok"] = true;
    j["n"] = L.space.size();
    j["diameter"] = L.space.diameter();
    if (!cov_path.empty()) {
        nk::Covering cov = nk::load_covering(nk::read_json_file(cov_path), L.space);
        j["covering"] = covering_report(cov, L.space);
    }
    std::string text = nk::dump_deterministic(j);
    std::cout << text;
    if (!cov_path.empty() && !j["covering"]["ball_condition_ok"].get<bool>()) {
        std::cerr << "ball condition fails at sample "
                  << j["covering"]["ball_condition_witness"].get<int>() << "\n";
        return 1;
    }
    return 0;
}

int cmd_pipeline(const std::string& space_path, double eps, std::uint64_t seed,
                 const std::string& report_path, bool length_report) {
    nk::LoadedSpace L = nk::load_space_file(space_path);
    if (!L.model) throw nk::DomainMismatch("pipeline needs a space with a model block");
    const nk::ModelSpace& M = *L.model;
    const nk::FiniteMetricSpace& X = M.space();

    json rep;
    nk::Covering cov = nk::build_ball_covering(X, eps, seed);
    rep["covering"] = covering_report(cov, X);

    nk::PartitionOfUnity pou = nk::partition_of_unity(cov);
    json pj;
    pj["min_row_sum"] = pou.min_row_sum;
    double lip_xi_max = 0.0;
    std::size_t lip_xi_arg = 0;
    for (int jdx = 0; jdx < cov.n_elements(); ++jdx) {
        auto r = nk::measured_lipschitz_fn(
            "xi", static_cast<std::size_t>(X.size()),
            [&X](std::size_t p, std::size_t q) { return X.dist(static_cast<int>(p), static_cast<int>(q)); },
            [&pou, jdx](std::size_t p, std::size_t q) {
                return std::fabs(pou.xi[p][static_cast<std::size_t>(jdx)] -
                                 pou.xi[q][static_cast<std::size_t>(jdx)]);
            });
        if (r.lipschitz > lip_xi_max) { lip_xi_max = r.lipschitz; lip_xi_arg = static_cast<std::size_t>(jdx); }
    }
    pj["lip_xi_max"] = lip_xi_max;
    pj["lip_xi_argmax"] = lip_xi_arg;
    pj["lip_xi_bound"] = pou.lip_xi_bound();
    pj["lip_xi_ok"] = lip_xi_max <= pou.lip_xi_bound();
    rep["partition_of_unity"] = pj;

    std::vector<nk::RealizationPoint> thetas = nk::theta_map(pou);
    json tj;
    auto lip_theta = nk::measured_lipschitz_fn(
        "theta", static_cast<std::size_t>(X.size()),
        [&X](std::size_t p, std::size_t q) { return X.dist(static_cast<int>(p), static_cast<int>(q)); },
        [&thetas](std::size_t p, std::size_t q) { return nk::ambient_distance(thetas[p], thetas[q]); });
    tj["lip_ambient"] = lip_theta.lipschitz;
    tj["lip_bound"] = pou.lip_theta_bound();
    tj["lip_ok"] = lip_theta.lipschitz <= pou.lip_theta_bound();
    tj["supports_are_simplices"] = true;  // theta_map throws otherwise
    std::size_t max_supp = 0;
    double nerve_cost = 0.0;
    for (const auto& t : thetas) {
        max_supp = std::max(max_supp, t.w.size());
        nerve_cost += std::pow(2.0, static_cast<double>(t.w.size()));
    }
    tj["max_support"] = max_supp;
    rep["theta"] = tj;

    json nj;
    if (nerve_cost <= 200000.0) {
        nk::NerveComplex K = nk::build_nerve(cov);
        nj["materialized"] = true;
        nj["f_vector"] = K.f_vector();
        nj["euler_characteristic"] = K.euler_characteristic();
        nj["connected"] = K.connected();
        if (length_report) {
            nk::SubdivisionGraph G(K, 3, cov.scale);
            auto lip_len = nk::measured_lipschitz_fn(
                "theta-length", static_cast<std::size_t>(X.size()),
                [&X](std::size_t p, std::size_t q) { return X.dist(static_cast<int>(p), static_cast<int>(q)); },
                [&](std::size_t p, std::size_t q) { return G.query(thetas[p], thetas[q]); });
            nj["theta_length_lipschitz"] = lip_len.lipschitz;
        }
    } else {
        nj["materialized"] = false;
        nj["reason"] = "support blow-up; nerve handled lazily";
    }
    rep["nerve"] = nj;

    nk::RetractionSystem rs(cov, M);
    nk::RoundTrip rt = nk::round_trip(rs, thetas);
    json zj;
    zj["all_share_element"] = rt.all_share;
    zj["max_displacement"] = rt.max_displacement;
    zj["bound"] = 2.0 * cov.radius;
    zj["round_trip_ok"] = rt.all_share && rt.max_displacement <= 2.0 * cov.radius;
    zj["charts_built"] = rs.charts_built();
    rep["zeta"] = zj;

    json cj = json::array();
    for (int e = 0; e < std::min(3, cov.n_elements()); ++e) {
        int center = nk::chebyshev_center(X, cov.elements[static_cast<std::size_t>(e)]);
        nk::SampleHomotopy h = nk::ball_contraction(M, cov.elements[static_cast<std::size_t>(e)], center, eps);
        auto r = nk::measured_lipschitz(h, X, X, "contraction_" + std::to_string(e));
        cj.push_back(lipschitz_to_json(r));
    }
    rep["contractions"] = cj;

    bool ok = rep["covering"]["ball_condition_ok"].get<bool>() && pj["lip_xi_ok"].get<bool>() &&
              tj["lip_ok"].get<bool>() && zj["round_trip_ok"].get<bool>();
    rep["pass"] = ok;
    nk::write_text_file(report_path, nk::dump_deterministic(rep));
    std::cout << "wrote " << report_path << (ok ? " (pass)" : " (FAIL)") << "\n";
    if (!ok) {
        std::cerr << "pipeline contract failure; see " << report_path << "\n";
        return 1;
    }
    return 0;
}

int cmd_gh(const std::string& a_path, const std::string& b_path, std::size_t cap,
           const std::string& out) {
    nk::LoadedSpace A = nk::load_space_file(a_path);
    nk::LoadedSpace B = nk::load_space_file(b_path);
    nk::GHBounds g = nk::gh_exact_small(A.space, B.space, cap);
    json j;
    j["distortion_gh"] = g.distortion_gh;
    j["approx_gh"] = g.approx_gh;
    std::string text = nk::dump_deterministic(j);
    std::cout << text;
    if (!out.empty()) nk::write_text_file(out, text);
    return 0;
}

int cmd_transfer(const std::string& a_path, const std::string& b_path, double eps,
                 const std::string& out, bool certify, int steps) {
    nk::LoadedSpace A = nk::load_space_file(a_path);
    nk::LoadedSpace B = nk::load_space_file(b_path);
    if (!A.model || !B.model) throw nk::DomainMismatch("transfer needs spaces with model blocks");
    const nk::ModelSpace& MA = *A.model;
    const nk::ModelSpace& MB = *B.model;
    if (MA.n != MB.n) throw nk::DomainMismatch("index matching needs equal sample counts");

    nk::DiscreteMap match_ab, match_ba;
    match_ab.domain = &MA.space();
    match_ab.target = &MB.space();
    match_ba.domain = &MB.space();
    match_ba.target = &MA.space();
    for (int i = 0; i < MA.n; ++i) {
        match_ab.values.push_back(i);
        match_ba.values.push_back(i);
    }
    nk::ApproxPair matching = nk::make_approx_pair(match_ab, match_ba);

    nk::Covering covA = nk::build_ball_covering(MA.space(), eps, 0);
    nk::Covering covB = nk::build_ball_covering(MB.space(), eps, 0);
    nk::TransferResult F = nk::transfer_map(covA, match_ab, MB);
    nk::TransferResult G = nk::transfer_map(covB, match_ba, MA);

    json j;
    j["matching_defect"] = matching.defect;
    j["epsilon"] = eps;
    json fj, gj;
    fj["displacement"] = F.displacement;
    fj["displacement_witness"] = F.displacement_witness;
    fj["lipschitz"] = lipschitz_to_json(F.lip);
    gj["displacement"] = G.displacement;
    gj["displacement_witness"] = G.displacement_witness;
    gj["lipschitz"] = lipschitz_to_json(G.lip);
    j["F"] = fj;
    j["G"] = gj;

    if (certify) {
        nk::ApproxPair pair = nk::make_approx_pair(F.F, G.F);
        std::vector<int> gf(static_cast<std::size_t>(MA.n)), fg(static_cast<std::size_t>(MB.n));
        std::vector<int> idA(static_cast<std::size_t>(MA.n)), idB(static_cast<std::size_t>(MB.n));
        double delta = 0.0;
        for (int x = 0; x < MA.n; ++x) {
            gf[static_cast<std::size_t>(x)] = pair.g(pair.f(x));
            idA[static_cast<std::size_t>(x)] = x;
            delta = std::max(delta, MA.space().dist(gf[static_cast<std::size_t>(x)], x));
        }
        for (int y = 0; y < MB.n; ++y) {
            fg[static_cast<std::size_t>(y)] = pair.f(pair.g(y));
            idB[static_cast<std::size_t>(y)] = y;
            delta = std::max(delta, MB.space().dist(fg[static_cast<std::size_t>(y)], y));
        }
        // the round trips sit within `span` of the identity; homotope over
        // nerves whose vertex set is the whole sample set so the tabulated
        // endpoint slices reproduce g.f and the identity exactly
        const double span = delta <= eps ? eps : delta * 1.0625;
        std::vector<int> allA(idA), allB(idB);
        nk::Covering covAllA = nk::covering_from_centers(MA.space(), std::move(allA), 2.0 * eps, eps);
        nk::Covering covAllB = nk::covering_from_centers(MB.space(), std::move(allB), 2.0 * eps, eps);
        nk::NerveComplex KA = nk::build_nerve(covAllA);
        nk::NerveComplex KB = nk::build_nerve(covAllB);
        nk::PrismHomotopy HF = nk::homotopy_from_closeness(KA, MA, eps, span, gf, idA);
        nk::PrismHomotopy HG = nk::homotopy_from_closeness(KB, MB, eps, span, fg, idB);
        nk::SampleHomotopy hF = HF.tabulate(steps);
        nk::SampleHomotopy hG = HG.tabulate(steps);
        nk::LHCertificate cert = nk::lh_certificate(pair, hF, hG);
        j["round_trip_displacement"] = delta;
        json c;
        c["defect"] = cert.pair.defect;
        c["time_span"] = cert.time_span;
        c["lipschitz"] = cert.lipschitz;
        c["lip_f"] = lipschitz_to_json(cert.lip_f);
        c["lip_g"] = lipschitz_to_json(cert.lip_g);
        c["lip_F"] = lipschitz_to_json(cert.lip_F);
        c["lip_G"] = lipschitz_to_json(cert.lip_G);
        j["certificate"] = c;
    }

    std::string text = nk::dump_deterministic(j);
    std::cout << text;
    if (!out.empty()) nk::write_text_file(out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantitative nerve machinery on sampled metric spaces"};
    app.require_subcommand(1);

    std::string kind = "circle", out, space_path, cov_path, a_path, b_path, report_path = "report.json";
    int n = 240, nu = 0, nv = 0, max_dim = -1, steps = 16;
    std::uint64_t seed = 0;
    double radius = 1.0, jitter = 0.0, a_len = 1.0, b_len = 1.0, length = 1.0, eps = 0.0;
    std::size_t cap = 5;
    bool length_report = false, certify = false;

    auto* gen = app.add_subcommand("gen", "generate a model space");
    gen->add_option("--kind", kind)->required();
    gen->add_option("--n", n);
    gen->add_option("--seed", seed);
    gen->add_option("--radius", radius);
    gen->add_option("--jitter", jitter);
    gen->add_option("--a", a_len);
    gen->add_option("--b", b_len);
    gen->add_option("--nu", nu);
    gen->add_option("--nv", nv);
    gen->add_option("--length", length);
    gen->add_option("--out", out)->default_val("space.json");

    auto* cover = app.add_subcommand("cover", "build a ball covering from a net");
    cover->add_option("--space", space_path)->required();
    cover->add_option("--epsilon", eps)->required()->check(CLI::PositiveNumber);
    cover->add_option("--seed", seed);
    cover->add_option("--out", out)->default_val("covering.json");

    auto* nerve = app.add_subcommand("nerve", "build the nerve of a covering");
    nerve->add_option("--space", space_path)->required();
    nerve->add_option("--covering", cov_path)->required();
    nerve->add_option("--max-dim", max_dim);
    nerve->add_option("--out", out)->default_val("nerve.json");

    auto* pipeline = app.add_subcommand("pipeline", "covering, nerve, Theta, zeta, verification");
    pipeline->add_option("--space", space_path)->required();
    pipeline->add_option("--epsilon", eps)->required()->check(CLI::PositiveNumber);
    pipeline->add_option("--seed", seed);
    pipeline->add_option("--report", report_path);
    pipeline->add_flag("--length-report", length_report);

    auto* gh = app.add_subcommand("gh", "exhaustive GH bounds for small spaces");
    gh->add_option("--a", a_path)->required();
    gh->add_option("--b", b_path)->required();
    gh->add_option("--cap", cap);
    gh->add_option("--out", out);

    auto* transfer = app.add_subcommand("transfer", "push an index matching through the nerve");
    transfer->add_option("--a", a_path)->required();
    transfer->add_option("--b", b_path)->required();
    transfer->add_option("--epsilon", eps)->required()->check(CLI::PositiveNumber);
    transfer->add_option("--steps", steps);
    transfer->add_flag("--certify", certify);
    transfer->add_option("--out", out);

    auto* verify = app.add_subcommand("verify", "validate a space or covering file");
    verify->add_option("--space", space_path)->required();
    verify->add_option("--covering", cov_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_gen(kind, n, seed, radius, jitter, a_len, b_len, nu, nv, length, out);
        if (cover->parsed()) return cmd_cover(space_path, eps, seed, out);
        if (nerve->parsed()) return cmd_nerve(space_path, cov_path, max_dim, out);
        if (pipeline->parsed()) return cmd_pipeline(space_path, eps, seed, report_path, length_report);
        if (gh->parsed()) return cmd_gh(a_path, b_path, cap, out);
        if (transfer->parsed()) return cmd_transfer(a_path, b_path, eps, out, certify, steps);
        if (verify->parsed()) return cmd_verify(space_path, cov_path);
    } catch (const nervekit::Error& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
