#include <qsharm/qsharm.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace qsharm;
using nlohmann::ordered_json;

namespace {

// bad flags, grids, suite names or F specs: exit 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int n = 2;
    int h_max = 4;
    std::vector<double> alphas{0, 1, 2, 2.9};
    std::vector<int> N_list{2, 4, 8, 16, 32, 64};
    std::vector<double> r_grid{0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format; // csv by default, json for kernel

    // scan and kernel options
    std::string family = "mihlin";
    bool divergence_study = false;
    int ell = 0;
    long cutoff = -1;
    bool acknowledge_truncation = false;
    std::size_t eval = 0;

    void validate() const
    {
        if (n < 2) throw UsageError("--n must be at least 2");
        if (h_max < 0) throw UsageError("--h-max must be nonnegative (empty grid)");
        if (alphas.empty() || N_list.empty() || r_grid.empty()) throw UsageError("grids must be nonempty");
        for (double a : alphas)
            if (!(a >= 0)) throw UsageError("--alpha entries must be nonnegative");
        for (int N : N_list)
            if (N < 1) throw UsageError("--N-list entries must be positive");
        for (double r : r_grid)
            if (!(r > 0)) throw UsageError("--r-grid entries must be positive");
        if (samples < 2) throw UsageError("--samples must be at least 2");
    }
};

ordered_json manifest(const RunConfig& c, const std::string& command)
{
    ordered_json m;
    m["command"] = command;
    m["n"] = c.n;
    m["seed"] = c.seed;
    m["samples"] = c.samples;
    m["grid"] = {{"h_max", c.h_max}, {"alpha", c.alphas}, {"N", c.N_list}, {"r", c.r_grid}};
    m["threads"] = worker_count();
    m["versions"] = versions_json();
    return m;
}

// Prints to stdout, or writes <out>/<stem>.<ext> plus <out>/<stem>.manifest.json.
void emit(const RunConfig& c, const std::string& stem, const std::string& ext, const std::string& body, const ordered_json& man)
{
    if (c.out.empty()) {
        std::cout << body;
        return;
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + c.out + ": " + ec.message());
    const fs::path dir(c.out);
    atomic_write(dir / (stem + "." + ext), body);
    atomic_write(dir / (stem + ".manifest.json"), man.dump(2) + "\n");
}

void emit_table(const RunConfig& c, const std::string& stem, const CsvTable& t, const ordered_json& man)
{
    if (c.format == "json") emit(c, stem, "json", t.json().dump(2) + "\n", man);
    else emit(c, stem, "csv", t.str(), man);
}

// ---------------------------------------------------------------------------

int cmd_dims(const RunConfig& c)
{
    CsvTable t({"h", "m", "dim", "lambda_delta", "lambda_gamma", "lambda_L"});
    for (const auto& i : index_grid(c.h_max)) {
        auto ev = eigenvalues(c.n, i.h, i.m);
        t.add(i.h, i.m, ev.dim.get_str(), ev.lambda_delta, ev.lambda_gamma, ev.lambda_L);
    }
    emit_table(c, "dims", t, manifest(c, "dims"));
    return 0;
}

int cmd_verify(const RunConfig& c, const std::string& suite)
{
    if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw UsageError("unknown suite '" + suite + "'");
    VerifyConfig v{c.n, c.h_max, c.alphas, c.N_list, c.r_grid, c.samples, c.seed};
    const auto checks = run_suite(suite, v);
    std::size_t failed = 0;
    for (const auto& ch : checks) failed += !ch.passed;

    auto man = manifest(c, "verify " + suite);
    man["checks"] = checks.size();
    man["failures"] = failed;
    if (c.format == "json") {
        ordered_json r;
        r["suite"] = suite;
        r["passed"] = failed == 0;
        r["failures"] = failed;
        r["checks"] = ordered_json::array();
        for (const auto& ch : checks) r["checks"].push_back({{"suite", ch.suite}, {"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
        emit(c, "verify-" + suite, "json", r.dump(2) + "\n", man);
    } else {
        CsvTable t({"suite", "name", "passed", "detail"});
        for (const auto& ch : checks) t.add(ch.suite, ch.name, ch.passed ? "true" : "false", ch.detail);
        emit(c, "verify-" + suite, "csv", t.str(), man);
    }
    std::cerr << "verify " << suite << ": " << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    for (const auto& ch : checks)
        if (!ch.passed) std::cerr << "  FAIL " << ch.suite << ": " << ch.name << (ch.detail.empty() ? "" : " (" + ch.detail + ")") << "\n";
    return failed ? 1 : 0;
}

// distinct seed streams per grid point; mc_mean uses seed + batch
std::uint64_t point_seed(std::uint64_t seed, std::size_t k) { return seed + (static_cast<std::uint64_t>(k) << 32); }

int scan_plancherel(const RunConfig& c)
{
    MultiplierFn profile = MultiplierFn::mihlin();
    if (c.family == "band") profile = MultiplierFn::band(0, 1);
    else if (c.family != "mihlin") throw UsageError("--family must be mihlin or band");
    for (double a : c.alphas)
        if (a >= 3 && !c.divergence_study) throw UsageError("alpha >= 3 requires --divergence-study");
    CsvTable t({"N", "alpha", "numerator", "denominator", "ratio", "method"});
    for (double a : c.alphas)
        for (int N : c.N_list) {
            auto p = plancherel_ratio(profile, c.n, a, N, c.divergence_study);
            t.add(N, a, p.numerator, p.denominator, p.ratio, p.method);
        }
    auto man = manifest(c, "scan plancherel");
    man["family"] = profile.describe();
    emit_table(c, "scan-plancherel", t, man);
    return 0;
}

int scan_ball_volume(const RunConfig& c)
{
    CsvTable t({"r", "estimate", "stderr"});
    std::vector<double> est;
    for (std::size_t k = 0; k < c.r_grid.size(); ++k) {
        auto e = ball_volume_mc(c.n, c.r_grid[k], c.samples, point_seed(c.seed, k));
        t.add(c.r_grid[k], e.estimate, e.stderr_);
        est.push_back(e.estimate);
    }
    auto man = manifest(c, "scan ball-volume");
    if (c.r_grid.size() >= 2) {
        auto fit = fit_loglog(c.r_grid, est);
        man["slope"] = fit.slope;
        man["intercept"] = fit.intercept;
        man["expected_slope"] = 4 * c.n + 2;
    }
    emit_table(c, "scan-ball-volume", t, man);
    return 0;
}

int scan_weight_integral(const RunConfig& c)
{
    for (double a : c.alphas)
        if (a >= 3) throw UsageError("weight-integral scan needs alpha < 3");
    CsvTable t({"r", "alpha", "estimate", "stderr", "ratio"});
    std::size_t k = 0;
    for (double a : c.alphas)
        for (double r : c.r_grid) {
            auto e = weight_integral_mc(c.n, r, a, c.samples, point_seed(c.seed, k++));
            double scale = std::min(std::pow(r, 4 * c.n + 2 - a), 1.0);
            t.add(r, a, e.estimate, e.stderr_, e.estimate / scale);
        }
    emit_table(c, "scan-weight-integral", t, manifest(c, "scan weight-integral"));
    return 0;
}

int scan_resolvent(const RunConfig& c)
{
    const int ell = c.ell ? c.ell : c.n + 1;
    if (ell < c.n + 1) throw UsageError("--ell must be at least n+1");
    CsvTable t({"r", "ell", "sum", "product", "uncertainty", "U"});
    for (double r : c.r_grid) {
        auto res = resolvent_diag_sum(c.n, r, ell);
        t.add(r, ell, res.sum, res.sum * std::min(std::pow(r, 4 * c.n + 2), 1.0), res.uncertainty, res.U);
    }
    auto man = manifest(c, "scan resolvent");
    man["ell"] = ell;
    emit_table(c, "scan-resolvent", t, man);
    return 0;
}

int cmd_scan(const RunConfig& c, const std::string& kind)
{
    if (kind == "plancherel") return scan_plancherel(c);
    if (kind == "ball-volume") return scan_ball_volume(c);
    if (kind == "weight-integral") return scan_weight_integral(c);
    if (kind == "resolvent") return scan_resolvent(c);
    throw UsageError("unknown scan kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// F specs: "band:lo,hi", "riesz:delta=D,t=T", "heat:t=T", "mihlin"; numbers may be fractions p/q

double parse_number(const std::string& s)
{
    try {
        if (s.find('/') != std::string::npos) return parse_rational(s).get_d();
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("malformed number '" + s + "' in F spec");
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) return out;
        start = pos + 1;
    }
}

MultiplierFn parse_fspec(const std::string& spec)
{
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto named = [&](std::initializer_list<std::string> keys) {
        std::map<std::string, double> v;
        for (const auto& kv : split(rest, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("expected key=value in F spec '" + spec + "'");
            std::string key = kv.substr(0, eq);
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw UsageError("unknown parameter '" + key + "' in F spec");
            if (!v.emplace(key, parse_number(kv.substr(eq + 1))).second) throw UsageError("repeated parameter '" + key + "'");
        }
        if (v.size() != keys.size()) throw UsageError("F spec '" + spec + "' is missing parameters");
        return v;
    };
    try {
        if (kind == "mihlin") {
            if (!rest.empty()) throw UsageError("mihlin takes no parameters");
            return MultiplierFn::mihlin();
        }
        if (kind == "band") {
            auto p = split(rest, ',');
            if (rest.empty() || p.size() != 2) throw UsageError("band needs 'band:lo,hi'");
            return MultiplierFn::band(parse_number(p[0]), parse_number(p[1]));
        }
        if (kind == "riesz") {
            auto v = named({"delta", "t"});
            return MultiplierFn::riesz(v["delta"], v["t"]);
        }
        if (kind == "heat") {
            auto v = named({"t"});
            return MultiplierFn::heat(v["t"]);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown multiplier '" + kind + "' (expected band, riesz, heat or mihlin)");
}

int cmd_kernel(const RunConfig& c, const std::string& spec)
{
    const auto f = parse_fspec(spec);
    long cutoff = c.cutoff;
    if (cutoff < 0) {
        auto end = f.support_end();
        if (!end) throw UsageError(f.describe() + " has unbounded support; pass --cutoff and --acknowledge-truncation");
        cutoff = static_cast<long>(std::floor(*end * *end));
    }
    KernelPolyF k(c.n);
    try {
        k = multiplier_kernel(f, c.n, cutoff, c.acknowledge_truncation);
    } catch (const std::domain_error& e) {
        throw UsageError(std::string(e.what()) + " (pass --acknowledge-truncation)");
    }
    auto man = manifest(c, "kernel " + spec);
    man["multiplier"] = f.describe();
    man["cutoff"] = cutoff;
    man["truncated"] = c.acknowledge_truncation;

    if (c.format == "csv") {
        CsvTable t({"h", "m", "lambda_L", "re", "im"});
        for (const auto& [i, a] : k.coeffs) t.add(i.h, i.m, lambda_L(c.n, i.h, i.m), a.real(), a.imag());
        emit(c, "kernel", "csv", t.str(), man);
        return 0;
    }
    ordered_json j = kernel_to_json(k);
    if (c.eval > 0) {
        KernelEvaluator ev(k);
        std::mt19937_64 rng(c.seed);
        j["evaluations"] = ordered_json::array();
        for (std::size_t s = 0; s < c.eval; ++s) {
            auto x = sample_sphere(rng, c.n), y = sample_sphere(rng, c.n);
            auto ip = hermitian_inner(x.point(), y.point());
            auto v = ev(ip.a, ip.norm2());
            auto coords = [](const SpherePoint<double>& p) {
                std::vector<double> out;
                for (const auto& q : p.point().coords) out.insert(out.end(), {q.a, q.b, q.c, q.d});
                return out;
            };
            j["evaluations"].push_back({{"x", coords(x)}, {"y", coords(y)}, {"re", v.real()}, {"im", v.imag()}});
        }
    }
    emit(c, "kernel", "json", j.dump(2) + "\n", man);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral computations on the quaternionic sphere"};
    app.set_version_flag("--version", std::string(qsharm::version));
    app.require_subcommand(1);
    RunConfig c;

    app.add_option("--n", c.n, "quaternionic dimension (>= 2)")->envname("QS_N");
    app.add_option("--h-max", c.h_max, "largest degree h in the index grid")->envname("QS_H_MAX");
    app.add_option("--alpha", c.alphas, "weight exponents, comma separated")->delimiter(',')->envname("QS_ALPHA");
    app.add_option("--N-list", c.N_list, "Plancherel scales N, comma separated")->delimiter(',')->envname("QS_N_LIST");
    app.add_option("--r-grid", c.r_grid, "radii, comma separated")->delimiter(',')->envname("QS_R_GRID");
    app.add_option("--samples", c.samples, "Monte Carlo samples per estimate")->envname("QS_SAMPLES");
    app.add_option("--seed", c.seed, "base RNG seed")->envname("QS_SEED");
    app.add_option("--out", c.out, "output directory (stdout when absent)")->envname("QS_OUT");
    app.add_option("--format", c.format, "csv or json (default csv; json for kernel)")->check(CLI::IsMember({"csv", "json"}))->envname("QS_FORMAT");

    auto* dims = app.add_subcommand("dims", "dimension and eigenvalue table for h <= h_max")->fallthrough();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run an invariant suite")->fallthrough();
    verify->add_option("suite", suite, "algebra, decomposition, zonal, recurrence, plancherel, geometry or all")->required();

    std::string kind;
    auto* scan = app.add_subcommand("scan", "write a scan table")->fallthrough();
    scan->add_option("kind", kind, "plancherel, ball-volume, resolvent or weight-integral")->required();
    scan->add_option("--family", c.family, "plancherel profile: mihlin or band")->envname("QS_FAMILY");
    scan->add_flag("--divergence-study", c.divergence_study, "allow alpha >= 3 in the plancherel scan");
    scan->add_option("--ell", c.ell, "resolvent power (default n+1)")->envname("QS_ELL");

    std::string fspec;
    auto* kernel = app.add_subcommand("kernel", "kernel polynomial of F(sqrt L)")->fallthrough();
    kernel->add_option("fspec", fspec, "band:lo,hi | riesz:delta=D,t=T | heat:t=T | mihlin")->required();
    kernel->add_option("--cutoff", c.cutoff, "largest lambda_L kept")->envname("QS_CUTOFF");
    kernel->add_flag("--acknowledge-truncation", c.acknowledge_truncation, "allow a cutoff that drops nonzero coefficients");
    kernel->add_option("--eval", c.eval, "number of random point pairs to evaluate at")->envname("QS_EVAL");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        c.validate();
        worker_count();
        if (c.format.empty() && !*kernel) c.format = "csv";
        if (*dims) return cmd_dims(c);
        if (*verify) return cmd_verify(c, suite);
        if (*scan) return cmd_scan(c, kind);
        if (*kernel) {
            if (c.format.empty()) c.format = "json";
            return cmd_kernel(c, fspec);
        }
    } catch (const UsageError& e) {
        std::cerr << "qsharm: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qsharm: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qsharm: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
