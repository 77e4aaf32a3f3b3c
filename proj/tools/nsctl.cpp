// nsctl: exact analysis of two-agent no-signaling correlation tables.
// Exit codes: 0 = check passed / computed, 1 = check failed, 2 = input error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "nsctl/bell.hpp"
#include "nsctl/catalog.hpp"
#include "nsctl/io.hpp"
#include "nsctl/mechanisms.hpp"
#include "nsctl/nosignaling.hpp"
#include "nsctl/polytope.hpp"

using namespace nsctl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::pair<Strategy, std::optional<ObservationPrior>> load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file '" + path + "'");
    return parse_strategy(in);
}

void print_human_table(const Strategy& s) {
    const Alphabets& al = s.alphabets();
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) {
            std::printf("  P(x,y | a=%d, b=%d):\n", a, b);
            for (int x = 0; x < al.nx; ++x) {
                std::printf("   ");
                for (int y = 0; y < al.ny; ++y)
                    std::printf(" %8s", format_rational(s.at(a, b, x, y)).c_str());
                std::printf("\n");
            }
        }
}

void print_ns_report(const NsReport& rep, const char* label) {
    std::printf("%s %s\n", label, rep.holds ? "holds" : "violated");
    for (const auto& v : rep.violations)
        std::printf("violation side=%s a=%d b=%d action=%d lhs=%s rhs=%s\n", side_name(v.side),
                    v.a, v.b, v.action, format_rational(v.lhs).c_str(),
                    format_rational(v.rhs).c_str());
}

int cmd_check_ns(const std::string& file, bool human) {
    auto [s, prior] = load_file(file);
    if (human) print_human_table(s);
    auto rep = check_no_signaling(s);
    print_ns_report(rep, "no-signaling");
    auto j = joint_from_prior(s, prior ? *prior : ObservationPrior::uniform(s.alphabets()));
    std::printf("cmi-x-b-given-a-nats %s\n",
                fmt_double(conditional_mutual_information(j, CmiKind::x_b_given_a)).c_str());
    std::printf("cmi-y-a-given-b-nats %s\n",
                fmt_double(conditional_mutual_information(j, CmiKind::y_a_given_b)).c_str());
    return rep.holds ? kExitOk : kExitCheckFailed;
}

int cmd_posterior(const std::string& file, const std::string& prior_mode) {
    auto [s, file_prior] = load_file(file);
    ObservationPrior prior = ObservationPrior::uniform(s.alphabets());
    if (prior_mode == "uniform") {
        // forced uniform
    } else if (prior_mode == "table") {
        if (!file_prior || file_prior->is_uniform_tag())
            throw std::runtime_error("--prior table requires a prior table in the file");
        prior = *file_prior;
    } else if (file_prior) {
        prior = *file_prior;
    }
    auto rep = check_posterior(s, prior);
    print_ns_report(rep, "posterior");
    return rep.holds ? kExitOk : kExitCheckFailed;
}

int cmd_membership(const std::string& file, bool show_decomposition, bool show_certificate,
                   const std::string& expect) {
    auto [s, prior] = load_file(file);
    auto res = local_membership(s);
    if (res.feasible) {
        std::printf("membership feasible atoms=%zu\n", res.decomposition->atoms.size());
        if (show_decomposition) {
            for (const auto& [w, d] : res.decomposition->atoms) {
                std::printf("atom %s f", format_rational(w).c_str());
                for (int fx : d.f) std::printf(" %d", fx);
                std::printf(" g");
                for (int gy : d.g) std::printf(" %d", gy);
                std::printf("\n");
            }
        }
    } else {
        std::printf("membership infeasible separation=%s\n",
                    format_rational(res.certificate->value_on_strategy -
                                    res.certificate->max_on_local)
                        .c_str());
        if (show_certificate) emit_certificate(std::cout, *res.certificate);
    }
    if (expect == "feasible") return res.feasible ? kExitOk : kExitCheckFailed;
    if (expect == "infeasible") return res.feasible ? kExitCheckFailed : kExitOk;
    return kExitOk;
}

int cmd_chsh(const std::string& file, const std::vector<int>& variant, bool all) {
    auto [s, prior] = load_file(file);
    auto report_one = [&](const ChshVariant& v) {
        Rational val = chsh_value(s, v);
        std::printf("chsh variant=%d%d%d value=%s verdict=%s\n", v.alpha, v.beta, v.gamma,
                    format_rational(val).c_str(), val > 2 ? "VIOLATES" : "SATISFIES");
        return val;
    };
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            std::printf("correlator a=%d b=%d value=%s\n", a, b,
                        format_rational(correlator(s, a, b)).c_str());
    if (all) {
        Rational best;
        bool violated = false;
        for (const auto& v : all_chsh_variants())
            if (report_one(v) > 2) violated = true;
        return violated ? kExitCheckFailed : kExitOk;
    }
    if (!variant.empty()) {
        if (variant.size() != 3) throw std::runtime_error("--variant needs three bits");
        ChshVariant v{variant[0], variant[1], variant[2]};
        return report_one(v) > 2 ? kExitCheckFailed : kExitOk;
    }
    auto [v, val] = max_chsh_violation(s);
    return report_one(v) > 2 ? kExitCheckFailed : kExitOk;
}

int cmd_vertices(bool local, bool nonlocal) {
    if (local == nonlocal) throw std::runtime_error("pass exactly one of --local / --nonlocal");
    if (local) {
        for (const auto& v : binary_local_vertices()) {
            std::printf("# local vertex alpha=%d beta=%d gamma=%d delta=%d\n", v.alpha, v.beta,
                        v.gamma, v.delta);
            emit_strategy(std::cout, v.strategy);
        }
    } else {
        for (const auto& v : binary_nonlocal_vertices()) {
            std::printf("# non-local vertex alpha=%d beta=%d gamma=%d\n", v.alpha, v.beta,
                        v.gamma);
            emit_strategy(std::cout, v.strategy);
        }
    }
    return kExitOk;
}

int cmd_simulate(const std::string& mechanism, std::uint64_t trials, std::uint64_t seed,
                 double tv_tol) {
    ObservationPrior prior = ObservationPrior::uniform(Alphabets{2, 2, 2, 2});
    EmpiricalTable e{Alphabets{}, {}, {}, 0, ""};
    Strategy exact = get_example("uniform").strategy;
    if (mechanism == "paper-active") {
        auto m = paper_active_mechanism();
        exact = induce_active(m);
        e = simulate(m, prior, trials, seed);
    } else if (mechanism == "one-way") {
        exact = one_way_protocol().mixed;
        e = simulate_one_way(prior, trials, seed);
    } else if (mechanism.rfind("file:", 0) == 0) {
        // a strategy file; it must be local so a passive mechanism exists
        auto [s, file_prior] = load_file(mechanism.substr(5));
        if (file_prior) prior = *file_prior;
        auto res = local_membership(s);
        if (!res.feasible)
            throw std::runtime_error("strategy is outside the local polytope; "
                                     "no passive mechanism to simulate");
        auto m = decomposition_to_mechanism(*res.decomposition);
        exact = s;
        e = simulate(m, prior, trials, seed);
    } else {
        throw std::runtime_error("unknown mechanism '" + mechanism + "'");
    }
    emit_empirical(std::cout, e);
    auto tv = empirical_tv(e, exact);
    const Alphabets& al = e.alphabets;
    for (int a = 0; a < al.na; ++a)
        for (int b = 0; b < al.nb; ++b) {
            const auto& v = tv.per_context[std::size_t(a) * al.nb + b];
            if (v)
                std::printf("tv a=%d b=%d value=%s\n", a, b, fmt_double(*v).c_str());
            else
                std::printf("tv a=%d b=%d absent\n", a, b);
        }
    std::printf("tv-max %s tolerance %s verdict %s\n", fmt_double(tv.max_tv).c_str(),
                fmt_double(tv_tol).c_str(), tv.max_tv <= tv_tol ? "PASS" : "FAIL");
    return tv.max_tv <= tv_tol ? kExitOk : kExitCheckFailed;
}

int cmd_examples(const std::string& name) {
    auto ex = get_example(name);
    if (ex.prior_assumed)
        std::cout << "# prior not stated in the source table; uniform assumed\n";
    emit_strategy(std::cout, ex.strategy, ex.prior);
    return kExitOk;
}

int cmd_verify_paper() {
    int failures = 0;
    auto check = [&](const char* what, bool ok) {
        std::printf("%s  %s\n", ok ? "PASS" : "FAIL", what);
        if (!ok) ++failures;
    };

    auto ab3 = get_example("ab3");
    auto binary2 = get_example("binary2");
    check("ab3 satisfies no-signaling", check_no_signaling(ab3.strategy).holds);
    check("binary2 satisfies no-signaling", check_no_signaling(binary2.strategy).holds);
    check("ab3 posterior condition", check_posterior(ab3.strategy, ab3.prior).holds);
    check("binary2 posterior condition",
          check_posterior(binary2.strategy, binary2.prior).holds);

    auto verify_infeasible = [](const Strategy& s) {
        auto res = local_membership(s);
        if (res.feasible) return false;
        Rational max_local;
        bool first = true;
        for (const auto& d : enumerate_deterministic(s.alphabets())) {
            Rational v =
                evaluate_functional(*res.certificate, induce_deterministic(s.alphabets(), d));
            if (first || v > max_local) max_local = v;
            first = false;
        }
        return max_local == res.certificate->max_on_local &&
               res.certificate->value_on_strategy > max_local;
    };
    check("ab3 outside the local polytope (certified)", verify_infeasible(ab3.strategy));
    check("binary2 outside the local polytope (certified)",
          verify_infeasible(binary2.strategy));

    check("binary2 correlators 1/3, 1, 1/3, -1",
          correlator(binary2.strategy, 0, 0) == Rational(1, 3) &&
              correlator(binary2.strategy, 0, 1) == 1 &&
              correlator(binary2.strategy, 1, 0) == Rational(1, 3) &&
              correlator(binary2.strategy, 1, 1) == -1);
    check("binary2 CHSH value 8/3",
          chsh_value(binary2.strategy, ChshVariant{0, 0, 0}) == Rational(8, 3));

    auto locals = binary_local_vertices();
    auto nonlocals = binary_nonlocal_vertices();
    bool locals_ok = locals.size() == 16;
    for (const auto& lv : locals) {
        auto res = local_membership(lv.strategy);
        locals_ok = locals_ok && res.feasible && res.decomposition->atoms.size() == 1;
        for (const auto& v : all_chsh_variants())
            locals_ok = locals_ok && chsh_value(lv.strategy, v) <= 2;
    }
    check("16 local vertices: feasible single atoms, CHSH <= 2", locals_ok);
    bool nonlocals_ok = nonlocals.size() == 8;
    for (const auto& nl : nonlocals) {
        nonlocals_ok = nonlocals_ok && verify_infeasible(nl.strategy) &&
                       check_no_signaling(nl.strategy).holds &&
                       chsh_value(nl.strategy, ChshVariant{nl.alpha, nl.beta, nl.gamma}) == 4;
    }
    check("8 non-local vertices: NS, infeasible, matched CHSH = 4", nonlocals_ok);

    auto active = paper_active_mechanism();
    check("active mechanism reconstructs binary2",
          induce_active(active) == binary2.strategy);
    check("active mechanism's W joint is active",
          !is_passive(wjoint_from_active(active, ObservationPrior::uniform(active.alphabets)))
               .passive);

    auto proto = one_way_protocol();
    check("one-way protocol mixes to binary2", proto.mixed == binary2.strategy);

    auto prior = ObservationPrior::uniform(Alphabets{2, 2, 2, 2});
    auto e1 = simulate(active, prior, 200000, 7);
    check("paper-active simulation max TV <= 0.01",
          empirical_tv(e1, induce_active(active)).max_tv <= 0.01);
    auto e2 = simulate_one_way(prior, 200000, 7);
    check("one-way simulation max TV <= 0.01",
          empirical_tv(e2, proto.mixed).max_tv <= 0.01);

    std::printf("verify-paper %s\n", failures == 0 ? "PASS" : "FAIL");
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for two-agent no-signaling correlation polytopes"};
    app.require_subcommand(1);
    bool human = false;
    app.add_flag("--human", human, "add human-readable tables to the output");

    std::string file, prior_mode, expect, mechanism = "paper-active", name;
    bool show_dec = false, show_cert = false, v_local = false, v_nonlocal = false, all = false;
    std::vector<int> variant;
    std::uint64_t trials = 200000, seed = 0;
    double tv_tol = 0.01;

    auto* ns = app.add_subcommand("check-ns", "verify the no-signaling conditions exactly");
    ns->add_option("file", file)->required();

    auto* post = app.add_subcommand("posterior", "verify the posterior conditions exactly");
    post->add_option("file", file)->required();
    post->add_option("--prior", prior_mode)->check(CLI::IsMember({"uniform", "table"}));

    auto* mem = app.add_subcommand("membership", "decide local-polytope membership");
    mem->add_option("file", file)->required();
    mem->add_flag("--decomposition", show_dec, "print the convex decomposition");
    mem->add_flag("--certificate", show_cert, "print the separating functional");
    mem->add_option("--expect", expect)->check(CLI::IsMember({"feasible", "infeasible"}));

    auto* chsh = app.add_subcommand("chsh", "correlators and CHSH functionals");
    chsh->add_option("file", file)->required();
    chsh->add_option("--variant", variant, "variant bits alpha beta gamma")->expected(3);
    chsh->add_flag("--all", all, "evaluate all 8 variants");

    auto* vert = app.add_subcommand("vertices", "emit the binary vertex catalog");
    vert->add_flag("--local", v_local);
    vert->add_flag("--nonlocal", v_nonlocal);

    auto* sim = app.add_subcommand("simulate", "seeded exact-rational simulation");
    sim->add_option("--mechanism", mechanism, "paper-active | one-way | file:PATH");
    sim->add_option("--trials", trials)->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed);
    sim->add_option("--tv-tol", tv_tol, "max TV pass threshold");

    auto* ex = app.add_subcommand("examples", "emit a built-in example in file format");
    ex->add_option("--name", name)->required();

    app.add_subcommand("verify-paper", "run every built-in reproduction check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (ns->parsed()) return cmd_check_ns(file, human);
        if (post->parsed()) return cmd_posterior(file, prior_mode);
        if (mem->parsed()) return cmd_membership(file, show_dec, show_cert, expect);
        if (chsh->parsed()) return cmd_chsh(file, variant, all);
        if (vert->parsed()) return cmd_vertices(v_local, v_nonlocal);
        if (sim->parsed()) return cmd_simulate(mechanism, trials, seed, tv_tol);
        if (ex->parsed()) return cmd_examples(name);
        return cmd_verify_paper();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
}
