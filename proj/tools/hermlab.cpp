// hermlab command line: exact local densities, Whittaker normalizations,
// Eisenstein normalizing factors, and the one-shot verification suites.

#include "hermlab/analytic.hpp"
#include "hermlab/assembly.hpp"
#include "hermlab/json_io.hpp"
#include "hermlab/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace hermlab;

namespace {

struct CliConfig {
    int precision_digits = 50;
    int k_max = 4;
    std::uint64_t budget = 1'000'000'000ull;
    int threads = 0;
    std::string format = "text";

    EngineOptions engine() const { return EngineOptions{k_max, budget, threads}; }
};

json parse_inline_or_file(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw std::invalid_argument("cannot open " + arg.substr(1));
        return json::parse(in);
    }
    return json::parse(arg);
}

std::pair<long long, long long> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) {
        long long v = std::stoll(s);
        return {v, v};
    }
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
}

std::string real_str(const Real& v, int digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

json complex_to_json(const ComplexValue& v, int digits) {
    json out;
    out["re"] = real_str(v.re, digits);
    out["im"] = real_str(v.im, digits);
    out["err"] = real_str(v.err, 3);
    return out;
}

int run_den(const CliConfig& cfg, const std::string& s_arg, const std::string& t_arg,
            long long p, const std::string& splitting, long long delta) {
    std::optional<LocalQuadExt> ctx;
    if (p > 0) {
        if (delta != 0) ctx = classify_prime(Discriminant(delta), p);
        else if (!splitting.empty()) ctx = make_local(p, splitting_from_string(splitting));
    }
    GramMatrix S = gram_from_json(parse_inline_or_file(s_arg), ctx);
    GramMatrix T = gram_from_json(parse_inline_or_file(t_arg), ctx);

    json out;
    if (!in_dual_star(T)) {
        out["value"] = "0";
        out["reason"] = "T not integral (outside Herm_m(O)^*)";
        out["polynomial"] = json::array({"0"});
    } else {
        DensityResult d = local_density(S, T, cfg.engine());
        out["value"] = to_string(d.value);
        out["stabilized_at"] = d.stabilized_at;
        json raw = json::array();
        for (const auto& [k, c] : d.raw_counts)
            raw.push_back(json{{"k", k}, {"count", c.str()}});
        out["raw_counts"] = raw;
        DensityPolynomial P = interpolate(S, T, -1, cfg.engine());
        out["polynomial"] = poly_to_json(P);
        out["degree_certified_to"] = P.degree_certified_to;
    }
    if (cfg.format == "json") std::cout << out.dump(2) << "\n";
    else {
        std::cout << "Den(S,T) = " << out["value"].get<std::string>();
        if (out.contains("reason")) std::cout << "   [" << out["reason"].get<std::string>() << "]";
        if (out.contains("stabilized_at")) std::cout << "   (stabilized at k=" << out["stabilized_at"] << ")";
        std::cout << "\nDen(S,T,X) coefficients:";
        for (const auto& c : out["polynomial"]) std::cout << " " << c.get<std::string>();
        std::cout << "\n";
        if (out.contains("raw_counts")) {
            std::cout << "raw counts:";
            for (const auto& rc : out["raw_counts"])
                std::cout << "  k=" << rc["k"] << ": " << rc["count"].get<std::string>();
            std::cout << "\n";
        }
    }
    return 0;
}

int run_verify(const CliConfig& cfg, const std::string& suite) {
    std::vector<CriterionResult> results = verify::run_suite(suite, cfg.engine());
    bool all = true;
    json report = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        report.push_back(json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        if (cfg.format != "json")
            std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name
                      << "  [" << r.detail << "]\n";
    }
    if (cfg.format == "json") std::cout << report.dump(2) << "\n";
    return all ? 0 : 2;
}

int run_table(const CliConfig& cfg, const std::string& kind, const std::string& jrange,
              int n, int m, long long delta, double s) {
    if (kind == "hecke" || kind == "sigma") {
        auto [lo, hi] = parse_range(jrange.empty() ? "1..20" : jrange);
        json rows = json::array();
        if (cfg.format == "csv" || cfg.format == "text")
            std::cout << (kind == "hecke" ? "j,sigma1,height_delta,height_logs\n" : "j,sigma0,sigma1,sigma2\n");
        for (long long j = lo; j <= hi; ++j) {
            if (kind == "hecke") {
                HeckeFaltings hf = hecke_faltings(j);
                std::ostringstream logs;
                for (const auto& [pp, c] : hf.height_delta.terms)
                    logs << (logs.tellp() > 0 ? " + " : "") << to_string(c) << "*ln(" << pp << ")";
                if (hf.height_delta.terms.empty()) logs << "0";
                if (cfg.format == "json")
                    rows.push_back(json{{"j", j},
                                        {"sigma1", hf.degree.str()},
                                        {"height_delta", hf.height_delta.eval_double()},
                                        {"height_logs", loglinear_to_json(hf.height_delta)}});
                else
                    std::cout << j << "," << hf.degree << "," << std::setprecision(15)
                              << hf.height_delta.eval_double() << "," << logs.str() << "\n";
            } else {
                if (cfg.format == "json")
                    rows.push_back(json{{"j", j},
                                        {"sigma0", to_string(sigma(0, j))},
                                        {"sigma1", to_string(sigma(1, j))},
                                        {"sigma2", to_string(sigma(2, j))}});
                else
                    std::cout << j << "," << to_string(sigma(0, j)) << "," << to_string(sigma(1, j))
                              << "," << to_string(sigma(2, j)) << "\n";
            }
        }
        if (cfg.format == "json") std::cout << rows.dump(2) << "\n";
        return 0;
    }
    if (kind == "lambda") {
        if (delta >= 0) throw CLI::ValidationError("--delta required (negative fundamental)");
        Discriminant D(delta);
        ComplexValue v = lambda_factor(m, n, Real(s), D);
        if (cfg.format == "json") std::cout << complex_to_json(v, cfg.precision_digits).dump(2) << "\n";
        else
            std::cout << "Lambda_" << m << "(" << s << ")^o_" << n << " [Delta=" << delta
                      << "] = " << real_str(v.re, 20) << (v.im == 0 ? "" : " + " + real_str(v.im, 20) + " i")
                      << "   (err <= " << real_str(v.err, 3) << ")\n";
        return 0;
    }
    throw CLI::ValidationError("unknown table kind: " + kind);
}

int run_coeff(const CliConfig& cfg, long long j, long long delta, int n) {
    Discriminant D(delta);
    CoefficientSeries series = finite_coefficient({Rational(j)}, D, n, cfg.engine());
    json out;
    out["j"] = j;
    out["delta"] = delta;
    json locals = json::object();
    for (const auto& [p, W] : series.local) locals[std::to_string(p)] = whittaker_to_json(W);
    out["local"] = locals;
    json values = json::object();
    for (const auto& s : {Rational(0), Rational(1, 2), Rational(-1, 2), Rational(1)}) {
        PrimePowerProduct v = series.eval_exact(s);
        v.fold_all();
        std::ostringstream os;
        os << to_string(v.mant);
        for (const auto& [pp, e] : v.exps) os << " * " << pp << "^(" << to_string(e) << ")";
        values[to_string(s)] = os.str();
    }
    out["finite_product"] = values;
    if (cfg.format == "json") std::cout << out.dump(2) << "\n";
    else {
        std::cout << "finite coefficient for T=[" << j << "], Delta=" << delta << ", n=" << n << "\n";
        for (auto& [s, v] : values.items()) std::cout << "  s=" << s << ": " << v.get<std::string>() << "\n";
        std::cout << "local primes:";
        for (auto& [p, w] : locals.items()) std::cout << " " << p;
        std::cout << "\n";
    }
    return 0;
}

int run_unfold(const CliConfig& cfg, int n, int m, long long delta, long long j, double s,
               double a_norm) {
    Discriminant D(delta);
    auto flat = [&](const Real& sv) { return ComplexValue::from_real(global_rank1_real(j, sv)); };
    ComplexValue v = corank1_unfold(n, m, D, Real(a_norm), flat, Real(s));
    if (cfg.format == "json") std::cout << complex_to_json(v, cfg.precision_digits).dump(2) << "\n";
    else
        std::cout << "unfold(n=" << n << ", m=" << m << ", Delta=" << delta << ", j=" << j
                  << ", s=" << s << ") = " << real_str(v.re, 20)
                  << (v.im == 0 ? "" : " + " + real_str(v.im, 20) + " i") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Hermitian local densities, Whittaker functions, and Eisenstein constants"};
    app.require_subcommand(1);
    CliConfig cfg;
    app.add_option("--precision", cfg.precision_digits, "working precision in decimal digits (>= 30)")
        ->check(CLI::Range(30, 100));
    app.add_option("--k-max", cfg.k_max, "stabilization cap for density counts");
    app.add_option("--budget", cfg.budget, "enumeration budget (ring elements visited)");
    app.add_option("--threads", cfg.threads, "worker threads (0 = hardware, HERMLAB_THREADS respected)");
    app.add_option("--format", cfg.format, "output format: text|json|csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    // den
    auto* den = app.add_subcommand("den", "local density Den(S,T) and its polynomial Den(S,T,X)");
    std::string s_arg, t_arg, splitting;
    long long den_p = 0, den_delta = 0;
    den->add_option("--S", s_arg, "Gram matrix for S (inline JSON or @file)")->required();
    den->add_option("--T", t_arg, "Gram matrix for T (inline JSON or @file)")->required();
    den->add_option("--p", den_p, "prime for bare-matrix input");
    den->add_option("--splitting", splitting, "inert|split|ramified for bare-matrix input");
    den->add_option("--delta", den_delta, "fundamental discriminant (picks the ramified model)");

    // verify
    auto* ver = app.add_subcommand("verify", "run an acceptance suite");
    std::string suite = "all";
    ver->add_option("suite", suite, "densities|analytic|groups|weil|assembly|all|group-orders");

    // table
    auto* tab = app.add_subcommand("table", "tabulate hecke/sigma/lambda values");
    std::string kind, jrange;
    int tab_n = 2, tab_m = 2;
    long long tab_delta = 0;
    double tab_s = 0.0;
    tab->add_option("kind", kind, "hecke|sigma|lambda")->required();
    tab->add_option("--j", jrange, "j range, e.g. 1..20");
    tab->add_option("--n", tab_n, "n for lambda");
    tab->add_option("--m", tab_m, "m for lambda");
    tab->add_option("--delta", tab_delta, "fundamental discriminant");
    tab->add_option("--s", tab_s, "s for lambda");

    // coeff
    auto* cf = app.add_subcommand("coeff", "finite Whittaker product for rank-1 T=[j]");
    long long cf_j = 1, cf_delta = -7;
    int cf_n = 2;
    cf->add_option("--j", cf_j, "positive integer j")->required();
    cf->add_option("--delta", cf_delta, "fundamental discriminant")->required();
    cf->add_option("--n", cf_n, "ambient rank n");

    // unfold
    auto* un = app.add_subcommand("unfold", "corank-1 unfolding combinator value");
    int un_n = 2, un_m = 2;
    long long un_delta = -7, un_j = 1;
    double un_s = 0.2, un_a = 1.0;
    un->add_option("--n", un_n);
    un->add_option("--m", un_m);
    un->add_option("--delta", un_delta)->required();
    un->add_option("--j", un_j, "rank-1 flat series parameter");
    un->add_option("--s", un_s);
    un->add_option("--a-norm", un_a, "|det a#| norm");

    // hecke
    auto* hk = app.add_subcommand("hecke", "Hecke degree and Faltings height delta table");
    std::string hk_range = "1..20";
    hk->add_option("--j", hk_range, "j or range j1..j2");

    CLI11_PARSE(app, argc, argv);

    try {
        if (den->parsed()) return run_den(cfg, s_arg, t_arg, den_p, splitting, den_delta);
        if (ver->parsed()) {
            if (suite == "group-orders") suite = "groups";
            return run_verify(cfg, suite);
        }
        if (tab->parsed()) return run_table(cfg, kind, jrange, tab_n, tab_m, tab_delta, tab_s);
        if (cf->parsed()) return run_coeff(cfg, cf_j, cf_delta, cf_n);
        if (un->parsed()) return run_unfold(cfg, un_n, un_m, un_delta, un_j, un_s, un_a);
        if (hk->parsed()) return run_table(cfg, "hecke", hk_range, 0, 0, 0, 0.0);
    } catch (const NotStabilized& e) {
        std::cerr << "error: " << e.what() << " (previous " << to_string(e.previous) << ", last "
                  << to_string(e.last) << ")\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
