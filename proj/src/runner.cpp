#include "exwave/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "exwave/calculus.hpp"
#include "exwave/ftm.hpp"
#include "exwave/nlw.hpp"
#include "exwave/profiles.hpp"
#include "exwave/propagator.hpp"
#include "exwave/transform.hpp"

namespace exwave::runner {

// std::map-backed objects, so references held by nested sections stay valid.
using json = nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add: width mismatch in " + name);
    rows.push_back(std::move(row));
}

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&os](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) os << format_double(v);
                    else os << v;
                },
                row[i]);
        }
        os << '\n';
    }
    return os.str();
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"selftest", "dispersive", "strichartz", "endpoint",
                                                "solve",    "ftm",        "sweep"};
    return names;
}

namespace {

// ---------------------------------------------------------------------------
// Config sections: every key read is recorded (with its default when absent)
// into the resolved config; leftover keys are errors.

class Section {
public:
    Section(const json& in, json& out, std::string path)
        : in_(in), out_(out), path_(std::move(path)) {
        if (!in_.is_object()) fail("", "expected an object");
        if (!out_.is_object()) out_ = json::object();
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        used_.insert(key);
        T value = fallback;
        if (in_.contains(key)) {
            try {
                value = in_.at(key).get<T>();
            } catch (const nlohmann::json::exception&) {
                fail(key, "has the wrong type");
            }
        }
        out_[key] = value;
        return value;
    }

    double number(const std::string& key, double fallback) { return get<double>(key, fallback); }

    /// Exponent that may be the string "inf".
    double exponent(const std::string& key, double fallback) {
        used_.insert(key);
        double value = fallback;
        if (in_.contains(key)) value = parse_exponent(in_.at(key), key);
        out_[key] = exponent_json(value);
        return value;
    }

    Section child(const std::string& key) {
        used_.insert(key);
        static const json empty = json::object();
        const json& src = in_.contains(key) ? in_.at(key) : empty;
        if (!src.is_object()) fail(key, "expected an object");
        out_[key] = json::object();
        return Section(src, out_[key], join(key));
    }

    bool has(const std::string& key) const { return in_.contains(key); }
    const json& raw(const std::string& key) const { return in_.at(key); }
    json& resolved() { return out_; }
    void mark(const std::string& key) { used_.insert(key); }

    void finish() const {
        for (auto it = in_.begin(); it != in_.end(); ++it)
            if (!used_.count(it.key())) fail(it.key(), "is not a recognised key");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("config: '" + (key.empty() ? (path_.empty() ? "<root>" : path_) : join(key)) + "' " + what);
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double parse_exponent(const json& v, const std::string& key) const {
        if (v.is_number()) return v.get<double>();
        if (v.is_string() && v.get<std::string>() == "inf") return kInf;
        fail(key, "must be a number or \"inf\"");
    }

    static json exponent_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

private:
    const json& in_;
    json& out_;
    std::string path_;
    std::set<std::string> used_;
};

void require(bool ok, Section& sec, const std::string& key, const std::string& what) {
    if (!ok) sec.fail(key, what);
}

RadialGrid read_grid(Section& root, double L, std::size_t n) {
    Section g = root.child("grid");
    const double length = g.number("L", L);
    const auto intervals = g.get<std::size_t>("n", n);
    g.finish();
    try {
        return make_grid(length, intervals);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: grid: ") + e.what());
    }
}

struct Datum {
    std::string label;
    RadialField u0;
    RadialField u1;
    std::optional<double> support;
};

Datum read_datum(Section sec, const RadialGrid& grid, const std::string& default_profile) {
    const auto profile = sec.get<std::string>("profile", default_profile);
    std::optional<double> support;
    if (sec.has("support")) support = sec.number("support", 0.0);
    else sec.mark("support");
    RadialField u0(grid);
    if (profile == "gaussian") {
        const double a = sec.number("amplitude", 1.0);
        const double c = sec.number("center", 3.0);
        const double w = sec.number("width", 0.5);
        require(w > 0.0, sec, "width", "must be positive");
        u0 = profiles::gaussian_bump(grid, a, c, w);
    } else if (profile == "exp") {
        u0 = profiles::exp_profile(grid);
    } else if (profile == "sine_arch") {
        u0 = profiles::sine_arch(grid);
    } else if (profile == "rough") {
        const double a = sec.number("amplitude", 1.0);
        const double s = sec.number("s", 0.875);
        const double delta = sec.number("delta", 0.01);
        const double c = sec.number("center", 4.0);
        const double hw = sec.number("halfwidth", 3.0);
        const int band = sec.get<int>("band_exponent", static_cast<int>(profiles::cubic_safe_band(grid).exponent));
        require(hw > 0.0 && c - hw >= 0.0, sec, "halfwidth", "must be positive with center - halfwidth >= 0");
        const DyadicBlock block{Dyadic{band}, BlockKind::leq};
        require(is_resolvable(block, grid), sec, "band_exponent", "is not resolvable on the grid");
        u0 = profiles::rough_profile(grid, a, s, delta, c, hw, Dyadic{band});
    } else if (profile == "dipole") {
        const int n = sec.get<int>("N_exponent", 0);
        const double rho0 = sec.number("rho0", 0.0);
        u0 = dipole_block(grid, Dyadic{n}, rho0);
    } else {
        sec.fail("profile", "must be one of gaussian, exp, sine_arch, rough, dipole");
    }
    sec.finish();
    return {profile, std::move(u0), RadialField(grid), support};
}

double datum_support(const Datum& d) { return d.support.value_or(data_support(d.u0, d.u1)); }

std::vector<double> read_numbers(Section& sec, const std::string& key, std::vector<double> fallback) {
    auto v = sec.get<std::vector<double>>(key, std::move(fallback));
    if (v.empty()) sec.fail(key, "must be a non-empty list");
    return v;
}

// ---------------------------------------------------------------------------
// Fan-out: results land in slot i regardless of scheduling.

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int k = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (k == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < k; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct Context {
    Section& root;
    int threads;
    std::vector<Table> tables;
    bool passed = true;
};

// ---------------------------------------------------------------------------

void run_selftest(Context& ctx) {
    const RadialGrid grid = read_grid(ctx.root, 32.0, 4096);
    Section sec = ctx.root.child("selftest");
    const int fields = sec.get<int>("fields", 20);
    const auto seed = sec.get<std::uint64_t>("seed", 1);
    const double tol = sec.number("tolerance", 1e-12);
    require(fields >= 1, sec, "fields", "must be >= 1");
    sec.finish();

    Table t{"selftest", {"field", "roundtrip_residual", "parseval_residual", "pass"}, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k = 0; k < fields; ++k) {
        std::vector<double> vals(grid.interior());
        for (double& v : vals) v = dist(rng);
        const RadialField f(grid, std::move(vals));
        const double rt = max_abs_diff(inverse(forward(f)), f) / f.max_abs();
        const double pr = parseval_residual(f);
        const bool ok = rt <= tol && pr <= tol;
        ctx.passed = ctx.passed && ok;
        t.add({static_cast<long long>(k), rt, pr, static_cast<long long>(ok)});
    }
    ctx.tables.push_back(std::move(t));
}

void run_dispersive(Context& ctx) {
    const RadialGrid grid = read_grid(ctx.root, 128.0, 16384);
    Section sec = ctx.root.child("dispersive");
    const auto Ns = sec.get<std::vector<int>>("N_exponents", {0, 1, 2});
    const auto ts = read_numbers(sec, "t", {1, 2, 4, 8, 16, 32, 64});
    const double rho0 = sec.number("rho0", 0.0);
    require(!Ns.empty(), sec, "N_exponents", "must be a non-empty list");
    require(ts.size() >= 4, sec, "t", "needs at least four samples");
    for (double t : ts) require(t >= 1.0, sec, "t", "samples must be >= 1");
    for (int e : Ns) require(is_resolvable({Dyadic{e}, BlockKind::tilde}, grid), sec, "N_exponents",
                             "contains an unresolvable block");
    sec.finish();

    std::vector<DispersiveResult> results(Ns.size());
    parallel_for(Ns.size(), ctx.threads, [&](std::size_t i) {
        const RadialField f = dipole_block(grid, Dyadic{Ns[i]}, rho0);
        if (support_extent(f, 1e-3) + *std::max_element(ts.begin(), ts.end()) > grid.length())
            throw TruncationError("dispersive: support + max t exceeds L");
        results[i] = dispersive_probe(Dyadic{Ns[i]}, f, ts);
    });

    Table samples{"dispersive", {"N", "t", "sup_norm", "fitted_slope"}, {}};
    Table fits{"dispersive_fit", {"N", "slope", "constant", "residual", "constant_ratio_to_previous"}, {}};
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        const double N = Dyadic{Ns[i]}.value();
        for (const auto& s : results[i].samples) samples.add({N, s.t, s.sup_norm, results[i].fit.exponent});
        const double ratio = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                    : results[i].fit.constant / results[i - 1].fit.constant;
        fits.add({N, results[i].fit.exponent, results[i].fit.constant, results[i].fit.residual, ratio});
    }
    ctx.tables.push_back(std::move(samples));
    ctx.tables.push_back(std::move(fits));
}

void run_strichartz(Context& ctx) {
    const RadialGrid grid = read_grid(ctx.root, 128.0, 8192);
    const Datum d = read_datum(ctx.root.child("data"), grid, "gaussian");
    Section sec = ctx.root.child("strichartz");
    const double T = sec.number("T", 64.0);
    const auto dts = read_numbers(sec, "dt_sample", {1.0 / 16.0, 1.0 / 32.0});
    std::vector<std::pair<double, double>> pairs;
    sec.mark("pairs");
    if (sec.has("pairs")) {
        const auto& raw = sec.raw("pairs");
        if (!raw.is_array() || raw.empty()) sec.fail("pairs", "must be a non-empty list of [q, r]");
        for (const auto& p : raw) {
            if (!p.is_array() || p.size() != 2) sec.fail("pairs", "entries must be [q, r]");
            pairs.emplace_back(sec.parse_exponent(p[0], "pairs"), sec.parse_exponent(p[1], "pairs"));
        }
    } else {
        pairs = {{2.0, 6.0}, {4.0, 4.0}, {kInf, 2.0}};
    }
    json resolved = json::array();
    for (auto [q, r] : pairs) {
        if (!(q >= 1.0) || !(r >= 1.0)) sec.fail("pairs", "exponents must be >= 1");
        resolved.push_back({Section::exponent_json(q), Section::exponent_json(r)});
    }
    sec.resolved()["pairs"] = resolved;
    require(T > 0.0, sec, "T", "must be positive");
    for (double h : dts) require(h > 0.0, sec, "dt_sample", "entries must be positive");
    sec.finish();
    check_truncation(grid, datum_support(d), T);

    struct Job {
        double q, r, h;
    };
    std::vector<Job> jobs;
    for (auto [q, r] : pairs)
        for (double h : dts) jobs.push_back({q, r, h});
    std::vector<double> norms(jobs.size());
    parallel_for(jobs.size(), ctx.threads, [&](std::size_t i) {
        norms[i] = half_wave_strichartz_norm(d.u0, T, jobs[i].h, jobs[i].q, jobs[i].r);
    });
    Table t{"strichartz", {"q", "r", "dt_sample", "T", "norm"}, {}};
    for (std::size_t i = 0; i < jobs.size(); ++i) t.add({jobs[i].q, jobs[i].r, jobs[i].h, T, norms[i]});
    ctx.tables.push_back(std::move(t));
}

void run_endpoint(Context& ctx) {
    const RadialGrid grid = read_grid(ctx.root, 128.0, 8192);
    Section sec = ctx.root.child("endpoint");
    const double q = sec.number("q", 6.0);
    const auto Ts = read_numbers(sec, "T", {32.0, 64.0});
    const double h = sec.number("dt_sample", 1.0 / 16.0);
    require(q > 4.0, sec, "q", "must exceed 4");
    require(h > 0.0, sec, "dt_sample", "must be positive");
    for (double T : Ts) require(T > 0.0, sec, "T", "entries must be positive");
    std::vector<Datum> data;
    sec.mark("profiles");
    json resolved = json::array();
    json defaults = json::array({{{"profile", "gaussian"}}, {{"profile", "exp"}},
                                                 {{"profile", "sine_arch"}}});
    const json& list = sec.has("profiles") ? sec.raw("profiles") : defaults;
    if (!list.is_array() || list.empty()) sec.fail("profiles", "must be a non-empty list of data objects");
    for (std::size_t i = 0; i < list.size(); ++i) {
        json out = json::object();
        data.push_back(read_datum(Section(list[i], out, sec.join("profiles[" + std::to_string(i) + "]")), grid,
                                  "gaussian"));
        resolved.push_back(out);
    }
    sec.resolved()["profiles"] = resolved;
    sec.finish();
    const double T_max = *std::max_element(Ts.begin(), Ts.end());
    for (const auto& d : data) check_truncation(grid, datum_support(d), T_max);

    std::vector<double> ratios(data.size() * Ts.size());
    parallel_for(ratios.size(), ctx.threads, [&](std::size_t i) {
        ratios[i] = endpoint_ratio(data[i / Ts.size()].u0, q, Ts[i % Ts.size()], h);
    });
    Table t{"endpoint", {"profile_index", "profile", "q", "T", "ratio"}, {}};
    for (std::size_t i = 0; i < ratios.size(); ++i)
        t.add({static_cast<long long>(i / Ts.size()), data[i / Ts.size()].label, q, Ts[i % Ts.size()], ratios[i]});
    ctx.tables.push_back(std::move(t));
}

void run_solve(Context& ctx, std::vector<std::string>& warnings) {
    const RadialGrid grid = read_grid(ctx.root, 32.0, 8192);
    const Datum d = read_datum(ctx.root.child("data"), grid, "gaussian");
    Section sec = ctx.root.child("solver");
    SolverConfig cfg;
    cfg.dt = sec.number("dt", 1e-3);
    cfg.T = sec.number("T", 10.0);
    cfg.sample_every = sec.get<int>("sample_every", 100);
    cfg.nonlinearity_on = sec.get<bool>("nonlinearity", true);
    cfg.monitor_every = sec.get<int>("monitor_every", 100);
    sec.finish();
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: solver: ") + e.what());
    }
    cfg.support = datum_support(d);
    cfg.warn = [&warnings](const std::string& m) { warnings.push_back(m); };
    const Trajectory traj = solve(d.u0, d.u1, cfg);

    Table t{"energy", {"t", "energy", "relative_drift"}, {}};
    const double e0 = energy(traj.front());
    for (const auto& st : traj) {
        const double e = energy(st);
        t.add({st.t, e, e0 == 0.0 ? 0.0 : (e - e0) / e0});
    }
    Table fin{"final_state", {"r", "u", "ut"}, {}};
    for (std::size_t j = 0; j < grid.interior(); ++j)
        fin.add({grid.sample_radius(j), traj.back().u[j], traj.back().ut[j]});
    ctx.tables.push_back(std::move(t));
    ctx.tables.push_back(std::move(fin));
}

FtmConfig read_ftm(Section sec) {
    FtmConfig c;
    c.s = sec.number("s", c.s);
    c.eps = sec.number("eps", c.eps);
    c.smallness_constant = sec.number("smallness_constant", c.smallness_constant);
    c.J = sec.get<int>("J", c.J);
    sec.mark("T");
    if (sec.has("T") && !(sec.raw("T").is_string() && sec.raw("T").get<std::string>() == "auto")) {
        if (!sec.raw("T").is_number()) sec.fail("T", "must be a number or \"auto\"");
        c.T = sec.raw("T").get<double>();
        sec.resolved()["T"] = *c.T;
    } else {
        sec.resolved()["T"] = "auto";
    }
    c.dt = sec.number("dt", c.dt);
    c.sample_every = sec.get<int>("sample_every", c.sample_every);
    c.track_direct = sec.get<bool>("track_direct", c.track_direct);
    sec.finish();
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ftm: ") + e.what());
    }
    return c;
}

const std::vector<std::string> kSummaryColumns{
    "J",        "T",          "steps",      "l4_tx",         "linf_l3",        "l2_l6",
    "linf_hs",  "data_hs",    "E0",         "E_T",           "energy_drift",   "flux_residual",
    "flux_tolerance", "bound_rhs", "bound_ratio", "sup_hs", "sup_ut_hs_minus_1", "recombine_error",
    "smallness_holds"};

std::vector<Cell> summary_row(const FtmReport& r) {
    return {static_cast<long long>(r.config.J), r.T, static_cast<long long>(r.steps), r.w_norms.l4_tx,
            r.w_norms.linf_l3, r.w_norms.l2_l6, r.w_norms.linf_hs, r.w_norms.data_hs, r.energy.E0, r.energy.E_T,
            r.energy.energy_drift, r.energy.flux_residual, r.energy.flux_tolerance, r.energy.bound_rhs,
            r.energy.bound_ratio, r.hs.sup_hs, r.hs.sup_ut_hs1, r.recombine_error,
            static_cast<long long>(r.smallness_holds)};
}

void run_ftm_cmd(Context& ctx, std::vector<std::string>& warnings) {
    const RadialGrid grid = read_grid(ctx.root, 32.0, 8192);
    const Datum d = read_datum(ctx.root.child("data"), grid, "rough");
    FtmConfig cfg = read_ftm(ctx.root.child("ftm"));
    cfg.support = datum_support(d);
    const FtmReport r = run_ftm(cfg, {d.u0, d.u1});
    warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());

    Table e{"ftm_energy", {"t", "energy", "running_max", "flux", "fd_derivative"}, {}};
    for (std::size_t i = 0; i < r.energy.times.size(); ++i)
        e.add({r.energy.times[i], r.energy.energy[i], r.energy.running_max[i], r.energy.flux[i],
               r.energy.fd_derivative[i]});
    Table s{"ftm_summary", kSummaryColumns, {}};
    s.add(summary_row(r));
    ctx.tables.push_back(std::move(e));
    ctx.tables.push_back(std::move(s));
}

void run_sweep(Context& ctx, std::vector<std::string>& warnings) {
    const RadialGrid grid = read_grid(ctx.root, 32.0, 8192);
    const Datum d = read_datum(ctx.root.child("data"), grid, "rough");
    FtmConfig base = read_ftm(ctx.root.child("ftm"));
    Section sec = ctx.root.child("sweep");
    auto Js = sec.get<std::vector<int>>("J", {4, 5, 6});
    require(Js.size() >= 2, sec, "J", "needs at least two values");
    std::sort(Js.begin(), Js.end());
    require(std::adjacent_find(Js.begin(), Js.end()) == Js.end(), sec, "J", "values must be distinct");
    sec.finish();
    base.support = datum_support(d);
    for (int J : Js) {
        FtmConfig c = base;
        c.J = J;
        check_truncation(grid, *c.support, c.horizon());
    }

    std::vector<FtmReport> reports(Js.size());
    parallel_for(Js.size(), ctx.threads, [&](std::size_t i) {
        FtmConfig c = base;
        c.J = Js[i];
        reports[i] = run_ftm(c, {d.u0, d.u1});
    });

    Table rows{"sweep", kSummaryColumns, {}};
    std::vector<FtmSweepPoint> points;
    for (const auto& r : reports) {
        for (const auto& w : r.warnings) warnings.push_back("J=" + std::to_string(r.config.J) + ": " + w);
        rows.add(summary_row(r));
        points.push_back({r.config.J, r.T, r.energy.E_T, r.w_norms.l2_l6, r.hs.sup_hs});
    }
    const FtmSweepFit fit = fit_ftm_sweep(points);
    Table f{"sweep_fit",
            {"w_slope", "w_slope_reference", "energy_slope", "energy_slope_reference", "hs_exponent",
             "hs_exponent_reference"},
            {}};
    f.add({fit.w_slope, 0.5 - base.s, fit.energy_slope, energy_growth_per_J(base.s), fit.hs_exponent,
           hs_growth_exponent(base.s)});
    ctx.tables.push_back(std::move(rows));
    ctx.tables.push_back(std::move(f));
}

}  // namespace

RunResult execute(const std::string& subcommand, const std::string& config_text, std::optional<int> threads) {
    if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    json in;
    try {
        in = json::parse(config_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    json resolved = json::object();
    Section root(in, resolved, "");
    const auto named = root.get<std::string>("subcommand", subcommand);
    if (named != subcommand) root.fail("subcommand", "does not match the requested subcommand");
    root.get<std::string>("output_dir", ".");
    int nthreads = root.get<int>("threads", 1);
    if (threads) nthreads = *threads;
    if (nthreads < 1) root.fail("threads", "must be >= 1");
    resolved["threads"] = nthreads;

    Context ctx{root, nthreads, {}, true};
    std::vector<std::string> warnings;
    if (subcommand == "selftest") run_selftest(ctx);
    else if (subcommand == "dispersive") run_dispersive(ctx);
    else if (subcommand == "strichartz") run_strichartz(ctx);
    else if (subcommand == "endpoint") run_endpoint(ctx);
    else if (subcommand == "solve") run_solve(ctx, warnings);
    else if (subcommand == "ftm") run_ftm_cmd(ctx, warnings);
    else run_sweep(ctx, warnings);
    root.finish();

    RunResult result;
    result.passed = ctx.passed;
    json manifest = json::object();
    manifest["subcommand"] = subcommand;
    manifest["config"] = resolved;
    manifest["files"] = json::array();
    std::string all;
    for (const auto& t : ctx.tables) {
        const std::string csv = t.to_csv();
        manifest["files"].push_back({{"name", t.name + ".csv"}, {"rows", t.rows.size()}, {"fnv1a", hex64(fnv1a(csv))}});
        all += t.name;
        all += '\n';
        all += csv;
    }
    manifest["content_hash"] = hex64(fnv1a(all));
    manifest["warnings"] = warnings;
    result.warnings = warnings;
    manifest["passed"] = result.passed;
    result.manifest = manifest.dump(2) + "\n";
    result.tables = std::move(ctx.tables);
    return result;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    std::string text;
    {
        std::ifstream in(options.config_path, std::ios::binary);
        if (!in) {
            err << "error[config]: cannot read " << options.config_path.string() << '\n';
            return kExitConfig;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    RunResult result;
    try {
        result = execute(options.subcommand, text, options.threads);
    } catch (const ConfigError& e) {
        err << "error[config]: " << e.what() << '\n';
        return kExitConfig;
    } catch (const TruncationError& e) {
        err << "error[truncation]: " << e.what() << '\n';
        return kExitTruncation;
    } catch (const SolverError& e) {
        err << "error[solver]: " << e.what() << " (t = " << e.time() << ")\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error[runtime]: " << e.what() << '\n';
        return kExitRuntime;
    }

    std::filesystem::path dir = options.output_dir.value_or(".");
    if (!options.output_dir) {
        const auto cfg = json::parse(result.manifest).at("config");
        dir = cfg.at("output_dir").get<std::string>();
    }
    try {
        std::filesystem::create_directories(dir);
        for (const auto& t : result.tables) {
            std::ofstream f(dir / (t.name + ".csv"), std::ios::binary);
            f << t.to_csv();
            if (!f) throw std::runtime_error("cannot write " + (dir / (t.name + ".csv")).string());
        }
        std::ofstream m(dir / "manifest.json", std::ios::binary);
        m << result.manifest;
        if (!m) throw std::runtime_error("cannot write manifest");
    } catch (const std::exception& e) {
        err << "error[output]: " << e.what() << '\n';
        return kExitRuntime;
    }
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    for (const auto& t : result.tables) out << (dir / (t.name + ".csv")).string() << '\n';
    if (!result.passed) {
        err << "selftest: residual above tolerance\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace exwave::runner
