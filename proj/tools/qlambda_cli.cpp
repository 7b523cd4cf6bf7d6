// Command-line front end: parse lambda specs and algebra expressions, run
// computations, emit text or JSON, and run the built-in verification suites.

#include <CLI11.hpp>

#include <iostream>

#include "qlambda/qlambda.hpp"
#include "qlambda/serialize.hpp"

using namespace qlambda;

namespace {

constexpr const char* kSchema = "qlambda/1";

std::string group_or_trivial(const FGAbelianGroup& g) { return g.to_string(); }

std::string render_scalar_text(const LambdaScalar& x, unsigned bits) {
    DecimalRendering d = render_decimal(x, bits);
    std::string out = x.to_string();
    if (!d.decimal) return out + " (decimal unavailable: PRECISION_EXHAUSTED)";
    if (d.error_bound == "0") return out + " (= " + *d.decimal + ")";
    return out + " (= " + *d.decimal + " +- " + d.error_bound + ")";
}

std::string render_cscalar_text(const CScalar& x, unsigned bits) {
    if (x.im.is_zero()) return render_scalar_text(x.re, bits);
    return render_scalar_text(x.re, bits) + " + i*[" + render_scalar_text(x.im, bits) + "]";
}

int run_ktheory(const std::string& spec_text, bool json, unsigned bits) {
    (void)bits;
    LambdaSpec spec = parse_lambda_spec(spec_text);
    KTheoryResult r = k_groups(spec);
    ClassificationReport cls = classify(r, spec);
    if (json) {
        Json j;
        j["schema"] = kSchema;
        j["command"] = "ktheory";
        j["spec"] = spec.to_string();
        Json kt = ktheory_to_json(r);
        for (auto& [key, val] : kt.items()) j[key] = val;
        j["classification"] = classification_to_json(cls);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "spec: " << spec.to_string() << "\n";
        std::cout << "method: " << k_method_name(r.method) << "\n";
        std::cout << "K_0 = " << group_or_trivial(r.k0) << "\n";
        std::cout << "K_1 = " << group_or_trivial(r.k1) << "\n";
        if (cls.unital_O_n) std::cout << "unital O_n: n = " << cls.unital_O_n->get_str() << "\n";
        if (cls.stable_O_n) std::cout << "stable O_n: n = " << cls.stable_O_n->get_str() << "\n";
        if (cls.is_Q_N) std::cout << "isomorphic to Q_N (Kirchberg-Phillips)\n";
        std::cout << "cuntz_krieger_possible: " << (cls.cuntz_krieger_possible ? "yes" : "no")
                  << "\n";
        if (!cls.notes.empty()) std::cout << "notes: " << cls.notes << "\n";
    }
    return 0;
}

int run_state(const std::string& spec_text, const std::string& expr, bool json, unsigned bits) {
    RingPtr ring = GammaRing::create(parse_lambda_spec(spec_text));
    AlgebraElement x = parse_algebra_expr(expr, ring);
    CScalar value = x.psi();
    if (json) {
        Json j;
        j["schema"] = kSchema;
        j["command"] = "state";
        j["spec"] = ring->spec().to_string();
        j["expr"] = expr;
        j["value"] = cscalar_to_json(value, bits);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << render_cscalar_text(value, bits) << "\n";
    }
    return 0;
}

int run_sf(const std::string& spec_text, const std::string& unitary, bool json, unsigned bits) {
    RingPtr ring = GammaRing::create(parse_lambda_spec(spec_text));
    MatrixElement u = parse_matrix_element(unitary, ring);
    LambdaScalar value = is_modular_unitary(u) ? sf_unitary(u) : sf_partial_isometry(u);
    if (json) {
        Json j;
        j["schema"] = kSchema;
        j["command"] = "sf";
        j["spec"] = ring->spec().to_string();
        j["unitary"] = unitary;
        j["value"] = scalar_to_json(value, bits);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "sf = " << render_scalar_text(value, bits) << "\n";
    }
    return 0;
}

int run_mk(const std::string& spec_text, int k, bool json) {
    RingPtr ring = GammaRing::create(parse_lambda_spec(spec_text));
    Int mk = m_k(ring, k);
    if (json) {
        Json j;
        j["schema"] = kSchema;
        j["command"] = "mk";
        j["spec"] = ring->spec().to_string();
        j["k"] = k;
        j["m_k"] = int_to_json(mk);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "m_" << k << " = " << mk.get_str() << "\n";
    }
    return 0;
}

int run_validate(const std::string& spec_text, bool json) {
    LambdaSpec spec = parse_lambda_spec(spec_text);
    ValidationReport rep = validate_spec(spec);
    if (json) {
        Json j;
        j["schema"] = kSchema;
        j["command"] = "validate";
        j["spec"] = spec.to_string();
        for (auto& [key, val] : validation_to_json(rep).items()) j[key] = val;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (rep.ok ? "ok" : "INVALID") << "\n";
        for (const auto& v : rep.violations)
            std::cout << "  " << error_code_name(v.code) << ": " << v.message << "\n";
        if (spec.kind == SpecCase::Algebraic) {
            std::cout << "  squarefree: " << (rep.squarefree ? "yes" : "no") << "\n";
            std::cout << "  irreducibility: " << irreducibility_name(rep.irreducibility) << "\n";
        }
    }
    return rep.ok ? 0 : 2;
}

int run_verify(const std::string& spec_text, const std::string& suite, uint64_t seed, int cases,
               bool json) {
    RingPtr ring = GammaRing::create(parse_lambda_spec(spec_text));
    VerifyOptions opt;
    opt.seed = seed;
    opt.cases = cases;
    std::vector<SuiteResult> results;
    if (suite == "all")
        results = run_all_suites(ring, opt);
    else
        results.push_back(run_suite(suite, ring, opt));
    bool all_passed = true;
    for (const auto& r : results)
        if (!r.passed) all_passed = false;
    if (json) {
        Json j;
        j["schema"] = kSchema;
        j["command"] = "verify";
        j["spec"] = ring->spec().to_string();
        j["suite"] = suite;
        j["seed"] = seed;
        j["cases"] = cases;
        j["passed"] = all_passed;
        Json arr = Json::array();
        for (const auto& r : results) {
            Json s;
            s["name"] = r.suite;
            s["passed"] = r.passed;
            s["applicable"] = r.applicable;
            s["cases_run"] = r.cases_run;
            if (!r.counterexample.empty()) s["counterexample"] = r.counterexample;
            if (!r.note.empty()) s["note"] = r.note;
            arr.push_back(std::move(s));
        }
        j["suites"] = std::move(arr);
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.suite;
            if (!r.applicable) std::cout << " (" << r.note << ")";
            std::cout << " [" << r.cases_run << " checks]\n";
            if (!r.passed) std::cout << "  first counterexample: " << r.counterexample << "\n";
        }
    }
    return all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computer algebra for the Q^lambda C*-algebras"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json = false;
    unsigned precision = 48;
    app.add_flag("--json", json, "emit JSON (schema qlambda/1)");
    app.add_option("--precision", precision, "bits for decimal renderings")->capture_default_str();

    std::string spec_text, expr_text, unitary_text, suite = "all";
    int k = 1, cases = 100;
    uint64_t seed = 1;

    auto* cmd_ktheory = app.add_subcommand("ktheory", "compute K_0, K_1 and classification");
    cmd_ktheory->add_option("--spec", spec_text, "lambda spec")->required();

    auto* cmd_state = app.add_subcommand("state", "evaluate the KMS state psi on an expression");
    cmd_state->add_option("--spec", spec_text, "lambda spec")->required();
    cmd_state->add_option("--expr", expr_text, "algebra expression")->required();

    auto* cmd_sf = app.add_subcommand("sf", "exact modular spectral flow of a unitary");
    cmd_sf->add_option("--spec", spec_text, "lambda spec")->required();
    cmd_sf->add_option("--unitary", unitary_text, "ukm(k,m;j,n), ujk(j,k), or matrix literal")
        ->required();

    auto* cmd_mk = app.add_subcommand("mk", "the integer m_k with m_k lambda^k < 1 <= (m_k+1) lambda^k");
    cmd_mk->add_option("--spec", spec_text, "lambda spec")->required();
    cmd_mk->add_option("--k", k, "power k >= 1")->required();

    auto* cmd_validate = app.add_subcommand("validate", "validate a lambda spec");
    cmd_validate->add_option("--spec", spec_text, "lambda spec")->required();

    auto* cmd_verify = app.add_subcommand("verify", "run randomized verification suites");
    cmd_verify->add_option("--spec", spec_text, "lambda spec")->required();
    cmd_verify->add_option("--suite", suite,
                           "ring|algebra|cuntz|kms|smusub|phiformula|snf|ranks|sfpos|all")
        ->capture_default_str();
    cmd_verify->add_option("--seed", seed, "rng seed")->capture_default_str();
    cmd_verify->add_option("--cases", cases, "randomized cases per suite")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_ktheory->parsed()) return run_ktheory(spec_text, json, precision);
        if (cmd_state->parsed()) return run_state(spec_text, expr_text, json, precision);
        if (cmd_sf->parsed()) return run_sf(spec_text, unitary_text, json, precision);
        if (cmd_mk->parsed()) return run_mk(spec_text, k, json);
        if (cmd_validate->parsed()) return run_validate(spec_text, json);
        if (cmd_verify->parsed()) return run_verify(spec_text, suite, seed, cases, json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::Internal ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
