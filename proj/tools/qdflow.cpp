// Command-line driver: critical graphs, the Bessel family, mother-body
// analysis and the randomized verification suites, with JSON/SVG output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdflow/bessel.hpp"
#include "qdflow/face.hpp"
#include "qdflow/json_io.hpp"
#include "qdflow/motherbody.hpp"
#include "qdflow/render.hpp"
#include "qdflow/verify.hpp"

namespace {

using namespace qdflow;

C parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw BadInput("expected RE,IM but got '" + text + "'");
    std::size_t used = 0;
    const double re = std::stod(text.substr(0, comma), &used);
    const double im = std::stod(text.substr(comma + 1), &used);
    return {re, im};
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << bytes;
}

void emit(const json& doc, const std::string& json_path, const std::string& svg_path) {
    if (!json_path.empty()) write_file(json_path, doc.dump(2) + "\n");
    if (!svg_path.empty()) write_file(svg_path, render_svg(scene_from_graph_json(doc)));
}

struct CommonFlags {
    std::string svg, jsonfile;
    double budget = 0.0;
    double tol = 0.0;

    TraceOptions trace_options() const {
        TraceOptions opt;
        if (budget > 0.0) opt.budget = budget;
        if (tol > 0.0) opt.path_tol = tol;
        return opt;
    }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--svg", f.svg, "write the critical graph as SVG");
    cmd->add_option("--json", f.jsonfile, "write the analysis as JSON");
    cmd->add_option("--budget", f.budget, "arc-length budget per trajectory");
    cmd->add_option("--tol", f.tol, "path tolerance for the tracer");
}

int run_graph(const std::string& lambda_s, const std::string& lambda2_s, const std::string& a_s,
              const std::string& b_s, const CommonFlags& flags) {
    C lambda;
    if (!lambda_s.empty()) {
        lambda = parse_complex(lambda_s);
    } else {
        lambda = std::sqrt(parse_complex(lambda2_s));
    }
    const QuadDiff qd(lambda, parse_complex(a_s), parse_complex(b_s));
    const CriticalGraph g = critical_graph(qd, flags.trace_options());
    emit(graph_document(g), flags.jsonfile, flags.svg);
    std::cout << "gate: " << to_string(g.gate_decision.branch) << ", short trajectories: "
              << g.short_trajectories.size() << "\n";
    return 0;
}

int run_family(const std::string& a_s, int overlay_n, bool verify_family,
               const CommonFlags& flags) {
    const FamilyParameter A(parse_complex(a_s));
    const QuadDiff qd = family_quaddiff(A);
    const CriticalGraph g = critical_graph(qd, flags.trace_options());
    json doc = graph_document(g);
    doc["A"] = to_json(A.value());
    if (overlay_n > 0) {
        const EmpiricalMeasure zeros =
            bessel_zeros(bessel_coeffs(overlay_n, A.value() * double(overlay_n)));
        const OverlayStats stats = overlay_distance(A, overlay_n, flags.trace_options());
        json jz = json::array();
        for (const C& z : zeros.points) jz.push_back(to_json(z));
        doc["overlay"] = {{"n", overlay_n},
                          {"zeros", std::move(jz)},
                          {"max_dist", stats.max_dist},
                          {"mean_dist", stats.mean_dist}};
        std::vector<C> extra(zeros.points.begin(), zeros.points.end());
        const Viewport vp = graph_viewport(g, extra);
        doc["view"] = {{"center", to_json(vp.center)}, {"half_width", vp.half_width}};
    }
    if (verify_family) {
        const int n = std::max(overlay_n, 20);
        json checks = json::array();
        for (const C z : {C(2.0, 2.0), C(-1.5, 1.0), C(1.0, -2.0)}) {
            checks.push_back({{"z", to_json(z)},
                              {"n", n},
                              {"residual", algebraic_residual(A, n, z)},
                              {"residual_2n", algebraic_residual(A, 2 * n, z)}});
        }
        doc["verify"] = std::move(checks);
    }
    emit(doc, flags.jsonfile, flags.svg);
    std::cout << "gate: " << to_string(g.gate_decision.branch) << ", short trajectories: "
              << g.short_trajectories.size() << "\n";
    return 0;
}

int run_motherbody(const std::string& p_s, const std::string& q_s, const std::string& r_s,
                   const CommonFlags& flags) {
    const AlgebraicEquation eq(parse_complex(p_s), parse_complex(q_s), parse_complex(r_s));
    const MassPair m = masses(eq);
    const QuadDiff qd = to_quaddiff(eq);
    const CriticalGraph g = critical_graph(qd, flags.trace_options());
    json doc = graph_document(g);
    doc["params"] = {{"p", to_json(eq.p())}, {"q", to_json(eq.q())}, {"r", to_json(eq.r())}};
    doc["masses"] = {{"m_plus", to_json(m.m_plus)},
                     {"m_minus", to_json(m.m_minus)},
                     {"real_mass_exists", m.real_mass_exists}};
    doc["quaddiff"] = {{"lambda", to_json(qd.lambda())},
                       {"a", to_json(qd.a())},
                       {"b", to_json(qd.b())}};
    json densities = json::array();
    for (const auto& st : g.short_trajectories) {
        const DensityResult d = density_along(eq, st.path);
        densities.push_back({{"total_mass", d.total_mass}});
    }
    doc["densities"] = std::move(densities);
    if (!flags.jsonfile.empty()) write_file(flags.jsonfile, doc.dump(2) + "\n");
    std::cout << "masses: (" << m.m_plus.real() << "," << m.m_plus.imag() << ") ("
              << m.m_minus.real() << "," << m.m_minus.imag() << "), real mass "
              << (m.real_mass_exists ? "exists" : "absent") << ", short trajectories: "
              << g.short_trajectories.size() << "\n";
    return 0;
}

int run_verify(const std::string& suite, int samples, std::uint64_t seed) {
    std::vector<CheckLine> lines;
    auto append = [&](std::vector<CheckLine> more) {
        lines.insert(lines.end(), more.begin(), more.end());
    };
    if (suite == "periods" || suite == "all") append(verify_periods(samples, seed));
    if (suite == "gates" || suite == "all") append(verify_gates(samples, seed));
    if (suite == "bessel" || suite == "all") append(verify_bessel(seed));
    if (lines.empty()) throw BadInput("unknown suite '" + suite + "'");

    bool all_pass = true;
    std::printf("%-42s %-6s %-12s %s\n", "check", "result", "worst", "detail");
    for (const auto& l : lines) {
        all_pass = all_pass && l.pass;
        std::printf("%-42s %-6s %-12.3e %s\n", l.name.c_str(), l.pass ? "pass" : "FAIL", l.worst,
                    l.detail.c_str());
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical graphs of lambda^2 (z-a)(z-b)/z^4 dz^2 and Bessel zero asymptotics"};
    app.require_subcommand(1);

    std::string lambda_s, lambda2_s, a_s, b_s;
    CommonFlags graph_flags;
    auto* graph = app.add_subcommand("graph", "trace the critical graph of one differential");
    auto* lam = graph->add_option("--lambda", lambda_s, "lambda as RE,IM");
    auto* lam2 = graph->add_option("--lambda2", lambda2_s, "lambda^2 as RE,IM");
    lam->excludes(lam2);
    lam2->excludes(lam);
    graph->add_option("--a", a_s, "zero a as RE,IM")->required();
    graph->add_option("--b", b_s, "zero b as RE,IM")->required();
    add_common(graph, graph_flags);

    std::string family_a;
    int overlay_n = 0;
    bool family_verify = false;
    CommonFlags family_flags;
    auto* family = app.add_subcommand("family", "critical graph of the Bessel-family differential");
    family->add_option("--A", family_a, "family parameter A as RE,IM")->required();
    family->add_option("--overlay-n", overlay_n, "overlay the zeros of B_n^(An)");
    family->add_flag("--verify", family_verify, "evaluate the algebraic-equation residuals");
    add_common(family, family_flags);

    std::string p_s, q_s, r_s;
    CommonFlags mb_flags;
    auto* mother = app.add_subcommand("motherbody", "analyse z^2 C^2 - (pz+q) C + r = 0");
    mother->add_option("--p", p_s, "coefficient p as RE,IM")->required();
    mother->add_option("--q", q_s, "coefficient q as RE,IM")->required();
    mother->add_option("--r", r_s, "coefficient r as RE,IM")->required();
    mother->add_option("--json", mb_flags.jsonfile, "write the analysis as JSON");
    mother->add_option("--budget", mb_flags.budget, "arc-length budget per trajectory");
    mother->add_option("--tol", mb_flags.tol, "path tolerance for the tracer");

    std::string suite = "all";
    int samples = 100;
    std::uint64_t seed = 1;
    auto* verify = app.add_subcommand("verify", "run the randomized verification suites");
    verify->add_option("--suite", suite, "periods, gates, bessel or all");
    verify->add_option("--samples", samples, "sample count for randomized suites");
    verify->add_option("--seed", seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (graph->parsed()) {
            if (lambda_s.empty() && lambda2_s.empty())
                throw BadInput("one of --lambda or --lambda2 is required");
            return run_graph(lambda_s, lambda2_s, a_s, b_s, graph_flags);
        }
        if (family->parsed()) return run_family(family_a, overlay_n, family_verify, family_flags);
        if (mother->parsed()) return run_motherbody(p_s, q_s, r_s, mb_flags);
        if (verify->parsed()) return run_verify(suite, samples, seed);
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
