// cdd: sharp spectral bounds under curvature-dimension-diameter conditions.
//
// Exit codes: 0 ok, 1 usage or unreadable input, 2 admissibility or proviso, 3 sweep rows out of
// domain, 4 CD violation, 5 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cdd/bounds.hpp>
#include <cdd/hardy.hpp>
#include <cdd/io.hpp>
#include <cdd/model_density.hpp>
#include <cdd/plap_solver.hpp>
#include <cdd/sl_solver.hpp>

using namespace cdd;

namespace {

enum Exit { kOk = 0, kUsage = 1, kAdmissibility = 2, kOutOfDomain = 3, kCdViolation = 4, kNumerical = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double tol = 1e-8;
    double limit_tol = 1e-5;
    double checker_tol = 1e-9;
    std::size_t samples = 401;
    std::size_t bg_grid = 4001;
    double truncation = 20.0;
    double c_bg = kDefaultCBG;
    std::string format = "text";
    unsigned seed = 12345;
    std::size_t triples = 2000;

    void validate() const
    {
        if (!(tol > 0) || !(limit_tol > 0) || !(checker_tol >= 0)) throw UsageError("tolerances must be positive");
        if (samples < 5 || bg_grid < 5) throw UsageError("grid sizes must be at least 5");
        if (!(truncation > 0) || !(c_bg >= 1)) throw UsageError("truncation must be positive and C_BG >= 1");
    }
};

double parse_extended(const std::string& s, const std::string& name)
{
    std::string t;
    for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
    if (t == "-inf" || t == "-infinity") return -kInf;
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("--" + name + ": not a number: " + s);
    }
    if (pos != s.size() || std::isnan(v)) throw UsageError("--" + name + ": not a number: " + s);
    return v;
}

// N in (0,1] is outside the theory; N in (1,2) is outside this method's case tables.
double parse_N(const std::string& s, bool bound_command)
{
    double N = parse_extended(s, "N");
    if (N == -kInf) throw UsageError("--N: -inf is not admissible");
    if (N > 0 && N <= 1) throw DomainError("N in (0,1] lies outside the curvature-dimension theory (admissible: N <= 0 or N > 1)");
    if (bound_command && N > 1 && N < 2)
        throw UnsupportedRangeError("N in (1,2) is admissible but not covered by these bounds (they are derived for N in (-inf,0] u [2,inf])");
    return N;
}

std::vector<double> parse_range(const std::string& s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw UsageError("--range must be a:b:n");
    double a = parse_extended(parts[0], "range"), b = parse_extended(parts[1], "range");
    int n;
    try {
        n = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw UsageError("--range: n must be an integer");
    }
    if (n < 1 || !std::isfinite(a) || !std::isfinite(b)) throw UsageError("--range needs finite a, b and n >= 1");
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

int cmd_bound(const RunConfig& cfg, const std::string& ineq, double K, const std::string& Ns, const std::string& Ds,
              std::optional<double> p)
{
    BoundRequest q;
    if (ineq == "poincare") q.inequality = Inequality::poincare;
    else if (ineq == "p-poincare") q.inequality = Inequality::p_poincare;
    else if (ineq == "log-sobolev") q.inequality = Inequality::log_sobolev;
    else throw UsageError("--inequality must be poincare, p-poincare or log-sobolev");
    q.K = K;
    q.N = parse_N(Ns, true);
    q.D = parse_extended(Ds, "D");
    q.p = p;
    q.tol = cfg.tol;
    q.limit_tol = cfg.limit_tol;
    BoundResult r = q.inequality == Inequality::log_sobolev ? log_sobolev_bound(q, cfg.c_bg, cfg.bg_grid) : compute_bound(q);
    if (cfg.format == "json") {
        std::cout << to_json(r).dump(2) << '\n';
    } else if (cfg.format == "csv") {
        std::cout.precision(17);
        std::cout << "value,case_label,method,exactness\n"
                  << r.value << ',' << r.case_label << ',' << r.method << ',' << to_string(r.exactness) << '\n';
    } else {
        std::cout << to_text(r);
    }
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, const std::string& param, const std::string& range, double K, const std::string& Ns,
              std::optional<double> d, std::optional<double> h, const std::string& out)
{
    double N = parse_N(Ns, false);
    std::vector<double> vals = parse_range(range);
    SweepResult s;
    if (param == "h") {
        if (!d) throw UsageError("--param h needs --d");
        s = monotonicity_sweep(K, N, *d, vals, std::min(cfg.tol, 1e-9));
    } else if (param == "d") {
        s = diameter_sweep(K, N, h.value_or(0.0), vals, std::min(cfg.tol, 1e-9));
    } else {
        throw UsageError("--param must be h or d");
    }
    std::string table;
    if (cfg.format == "json") {
        table = to_json(s, param).dump(2) + "\n";
    } else if (cfg.format == "csv" || !out.empty()) {
        std::ostringstream o;
        write_sweep_csv(o, s, param);
        table = o.str();
    } else {
        table = to_text(s, param);
    }
    emit(out, table);
    if (!out.empty()) std::cout << "verdict " << (s.passed ? "PASS" : "FAIL") << " (" << s.regime << ")\n";
    return s.out_of_domain > 0 ? kOutOfDomain : kOk;
}

int cmd_check_cd(const RunConfig& cfg, const std::string& path, double K, const std::string& Ns, const std::string& mode)
{
    double N = parse_N(Ns, false);
    GridDensity g;
    try {
        g = read_grid_csv(path);
        g.validate();
    } catch (const DomainError& e) {
        throw UsageError(std::string("density CSV: ") + e.what());
    }
    CdReport r;
    if (mode == "diff") r = cd_differential_check(g, K, N, cfg.checker_tol);
    else if (mode == "midpoint") r = cd_midpoint_check(g, K, N, cfg.triples, cfg.seed, cfg.checker_tol);
    else throw UsageError("--mode must be diff or midpoint");
    if (cfg.format == "json") std::cout << to_json(r, mode).dump(2) << '\n';
    else if (cfg.format == "csv") {
        std::cout.precision(17);
        std::cout << "mode,passed,checked,max_violation,min_residual\n"
                  << mode << ',' << (r.passed ? 1 : 0) << ',' << r.checked << ',' << r.max_violation << ',' << r.min_residual << '\n';
    } else std::cout << to_text(r, mode);
    return r.passed ? kOk : kCdViolation;
}

// Model measure J_{K,N,h} on [-D/2, D/2] intersected with its support; infinite ends cut at +-truncation.
ModelMeasure profile_measure(const RunConfig& cfg, double K, double N, double D, double h)
{
    CurvatureDimension cd(K, N);
    Interval s = model_support(cd, h);
    double half = std::isfinite(D) ? D / 2 : cfg.truncation;
    double a = std::max(-half, s.lo), b = std::min(half, s.hi);
    // Stay off a vanishing or singular end of the support.
    double pad = 1e-6 * (b - a);
    if (a == s.lo) a += pad;
    if (b == s.hi) b -= pad;
    if (!(a < b)) throw DomainError("empty interval");
    return ModelMeasure(cd, h, a, b);
}

int cmd_profile(const RunConfig& cfg, double K, const std::string& Ns, const std::string& Ds, double h, std::optional<double> p,
                const std::string& what, const std::string& out)
{
    double N = parse_N(Ns, false);
    double D = parse_extended(Ds, "D");
    if (!(D > 0)) throw DomainError("D must be positive (or inf)");
    ModelMeasure m = profile_measure(cfg, K, N, D, h);
    std::ostringstream o;
    std::vector<std::string> head{"K=" + std::to_string(K) + " N=" + Ns + " D=" + Ds + " h=" + std::to_string(h),
                                  "interval [" + std::to_string(m.a) + ", " + std::to_string(m.b) + "]"};
    if (what == "density") {
        head.push_back("columns: x, J_{K,N,h}(x) (J(0) = 1)");
        write_grid_csv(o, sample_density(m, cfg.samples), head, "x", "density");
    } else if (what == "eigenfunction") {
        SolverOptions so;
        so.samples = cfg.samples;
        EigenResult e = p ? plap_first_eigenvalue(m, *p, cfg.tol, so) : sl_first_eigenvalue(m, cfg.tol, so);
        std::ostringstream lam;
        lam.precision(15);
        lam << "lambda=" << e.lambda << (p ? " p=" + std::to_string(*p) : std::string(" p=2"));
        head.push_back(lam.str());
        head.push_back("columns: x, u(x) with int |u|^p J = 1");
        write_grid_csv(o, e.eigenfunction, head, "x", "eigenfunction");
    } else if (what == "isoperimetric") {
        DistributionCache dc(sample_density(m, cfg.bg_grid));
        GridDensity I{1.0 / (cfg.samples + 1), 1.0 / (cfg.samples + 1), std::vector<double>(cfg.samples)};
        for (std::size_t i = 0; i < I.size(); ++i) I.values[i] = isoperimetric_profile_flat(dc, I.x(i));
        head.push_back("columns: t, I_flat(t) for the normalized measure");
        write_grid_csv(o, I, head, "t", "profile");
    } else if (what == "bg-supremand") {
        DistributionCache dc(sample_density(m, cfg.bg_grid));
        TwoSidedEstimate e = bobkov_gotze_estimate(dc, cfg.c_bg);
        std::ostringstream b;
        b.precision(15);
        b << "B_minus=" << e.b_minus << " B_plus=" << e.b_plus << " median=" << dc.median();
        head.push_back(b.str());
        head.push_back("columns: x, mu(tail) log(1/mu(tail)) int_median^x 1/p on the side of x");
        write_grid_csv(o, hardy_supremand_curve(dc, HardyKind::bobkov_gotze), head, "x", "supremand");
    } else {
        throw UsageError("--emit must be density, eigenfunction, isoperimetric or bg-supremand");
    }
    emit(out, o.str());
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sharp Poincare, p-Poincare and log-Sobolev bounds under CDD(K,N,D)", "cdd"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file with RunConfig defaults (command-line flags win)");

    RunConfig cfg;
    app.add_option("--tol", cfg.tol, "relative solver tolerance")->capture_default_str();
    app.add_option("--limit-tol", cfg.limit_tol, "stopping tolerance of eps/R limits")->capture_default_str();
    app.add_option("--checker-tol", cfg.checker_tol, "CD checker tolerance")->capture_default_str();
    app.add_option("--samples", cfg.samples, "eigenfunction/profile samples")->capture_default_str();
    app.add_option("--bg-grid", cfg.bg_grid, "density grid for Hardy estimators")->capture_default_str();
    app.add_option("--truncation", cfg.truncation, "half-width used for infinite D in profiles")->capture_default_str();
    app.add_option("--c-bg", cfg.c_bg, "Bobkov-Goetze bracket constant")->capture_default_str();
    app.add_option("--format", cfg.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "midpoint-check RNG seed")->capture_default_str();
    app.add_option("--triples", cfg.triples, "midpoint-check triples")->capture_default_str();

    double K = 0.0;
    std::string Ns = "inf", Ds = "inf", ineq, out, param, range, density, mode = "diff", what;
    std::optional<double> p, d, hopt;
    double h = 0.0;

    auto* bound = app.add_subcommand("bound", "sharp lower bound for a spectral inequality");
    bound->add_option("--inequality", ineq, "poincare | p-poincare | log-sobolev")->required();
    bound->add_option("--K", K, "curvature lower bound")->required();
    bound->add_option("--N", Ns, "effective dimension (real or inf)")->required();
    bound->add_option("--D", Ds, "diameter (real or inf)")->required();
    bound->add_option("--p", p, "exponent for p-poincare");

    // "--h" is a model parameter, so the subcommands keep only the long help flag.
    auto* sweep = app.add_subcommand("sweep", "monotonicity sweep over h or d");
    sweep->set_help_flag("--help", "print this help message and exit");
    sweep->add_option("--param", param, "h | d")->required();
    sweep->add_option("--range", range, "a:b:n")->required();
    sweep->add_option("--K", K, "curvature")->required();
    sweep->add_option("--N", Ns, "effective dimension")->required();
    sweep->add_option("--d", d, "interval length for --param h");
    sweep->add_option("--h", hopt, "h for --param d (default 0)");
    sweep->add_option("--out", out, "table file (default stdout)");

    auto* check = app.add_subcommand("check-cd", "CD(K,N) check of a sampled density");
    check->add_option("--density", density, "CSV with x,value rows")->required();
    check->add_option("--K", K, "curvature")->required();
    check->add_option("--N", Ns, "effective dimension")->required();
    check->add_option("--mode", mode, "diff | midpoint")->capture_default_str();

    auto* profile = app.add_subcommand("profile", "export density, eigenfunction, isoperimetric profile or BG supremand");
    profile->set_help_flag("--help", "print this help message and exit");
    profile->add_option("--K", K, "curvature")->required();
    profile->add_option("--N", Ns, "effective dimension")->required();
    profile->add_option("--D", Ds, "diameter; the interval is [-D/2, D/2]")->required();
    profile->add_option("--h", h, "model parameter h = J'(0)")->capture_default_str();
    profile->add_option("--p", p, "p-Laplacian exponent for --emit eigenfunction");
    profile->add_option("--emit", what, "density | eigenfunction | isoperimetric | bg-supremand")->required();
    profile->add_option("--out", out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        cfg.validate();
        if (*bound) return cmd_bound(cfg, ineq, K, Ns, Ds, p);
        if (*sweep) return cmd_sweep(cfg, param, range, K, Ns, d, hopt, out);
        if (*check) return cmd_check_cd(cfg, density, K, Ns, mode);
        if (*profile) return cmd_profile(cfg, K, Ns, Ds, h, p, what, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAdmissibility;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
