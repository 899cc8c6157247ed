// diophant: a desk-scale laboratory for best approximations of the linear
// form L(x) = x0 + x1 theta1 + x2 theta2 and the exponents attached to it.
//
// Subcommands: enumerate, analyze, exponents, omega-star, ledger, gallery,
// verify. Every payload file is a deterministic function of the
// configuration; timing goes to stderr only.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "diophant/diophant.hpp"

using namespace diophant;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string theta;
    std::string theta2;
    std::string p_coeffs; // "c0,c1,c2" rationals (general mode)
    std::string norm = "euclid";
    long tmax = 1000;
    long hmax = 1000;
    long precision_bits = 256;
    long burn_in = 3;
    double slack = 0.5;
    std::string cache_dir;
    std::string out_dir = ".";
    std::string format = "both";
    int workers = 0;
};

std::string default_cache_dir() {
    if (const char *env = std::getenv("DIOPHANT_CACHE"))
        return env;
    return "cache";
}

void add_common(CLI::App *cmd, CommonOpts &o, bool needs_theta) {
    auto *t = cmd->add_option("--theta", o.theta,
                              "theta spec (cbrt:N, poly:[c0,..]@i, cf-fib:N, dec:D, rand:S, "
                              "gallery:NAME)");
    if (needs_theta)
        t->required();
    cmd->add_option("--theta2", o.theta2, "second theta (general mode)");
    cmd->add_option("--P", o.p_coeffs, "P coefficients c0,c1,c2 (general mode; rationals)");
    cmd->add_option("--norm", o.norm, "norm: euclid or sup")->check(CLI::IsMember({"euclid", "sup"}));
    cmd->add_option("--tmax", o.tmax, "height bound T")->check(CLI::PositiveNumber);
    cmd->add_option("--precision", o.precision_bits, "working precision in bits (>= 64)");
    cmd->add_option("--burn-in", o.burn_in, "records excluded from asymptotic checks");
    cmd->add_option("--slack", o.slack, "verdict slack");
    cmd->add_option("--cache-dir", o.cache_dir, "cache directory (env DIOPHANT_CACHE)");
    cmd->add_option("--out", o.out_dir, "output directory for reports");
    cmd->add_option("--format", o.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    cmd->add_option("--workers", o.workers, "enumeration workers (0 = auto)");
}

RealCtx make_ctx(const CommonOpts &o) {
    if (o.precision_bits < 64)
        throw config_error("precision_bits must be >= 64");
    return RealCtx(o.precision_bits);
}

std::array<mpq_class, 3> parse_p(const std::string &text) {
    std::array<mpq_class, 3> c;
    size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        size_t comma = text.find(',', pos);
        std::string item =
            comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos);
        if (item.empty() || (comma == std::string::npos && i < 2))
            throw config_error("--P needs three comma-separated rationals");
        c[static_cast<size_t>(i)] = parse_rational(item);
        pos = comma + 1;
    }
    return c;
}

std::shared_ptr<const FormSet> make_forms(const CommonOpts &o) {
    std::string text = resolve_theta_text(o.theta);
    auto t1 = std::make_shared<ThetaValue>(text);
    if (o.theta2.empty() && o.p_coeffs.empty())
        return std::make_shared<const FormSet>(FormSet::theorem2(std::move(t1)));
    if (o.theta2.empty() || o.p_coeffs.empty())
        throw config_error("general mode needs both --theta2 and --P");
    auto t2 = std::make_shared<ThetaValue>(resolve_theta_text(o.theta2));
    return std::make_shared<const FormSet>(
        FormSet::general(std::move(t1), std::move(t2), parse_p(o.p_coeffs)));
}

io::CacheKey cache_key(const CommonOpts &o, const FormSet &fsets) {
    io::CacheKey key;
    key.theta_text = fsets.theta1()->spec().text();
    if (!fsets.is_theorem2()) {
        key.theta2_text = fsets.theta2()->spec().text();
        key.p_text = o.p_coeffs;
    }
    key.norm = norm_from_string(o.norm);
    key.precision_bits = o.precision_bits;
    return key;
}

void print_warnings(const FormSet &fsets, const RealCtx &ctx) {
    std::vector<std::string> ws = fsets.theta1()->warnings();
    fsets.theta1()->check_precision_demand(ctx, ws);
    if (!fsets.is_theorem2()) {
        auto more = fsets.theta2()->warnings();
        ws.insert(ws.end(), more.begin(), more.end());
        fsets.theta2()->check_precision_demand(ctx, ws);
    }
    auto relations = fsets.refute_independence(ctx);
    for (size_t i = 0; i < relations.size() && i < 3; ++i)
        ws.push_back("independence of 1, theta1, theta2 is refuted by the relation m = " +
                     relations[i].to_string() + " (the linear-independence assumption fails)");
    if (relations.size() > 3)
        ws.push_back("... and " + std::to_string(relations.size() - 3) + " further relations");
    for (const auto &w : ws)
        std::cerr << "warning: " << w << "\n";
}

// Enumerate through the cache: reuse when T is already covered, extend
// append-only otherwise, create fresh when absent.
MinimalSequence cached_enumerate(const CommonOpts &o, std::shared_ptr<const FormSet> fsets,
                                 const RealCtx &ctx, bool *reused = nullptr) {
    NormKind norm = norm_from_string(o.norm);
    fs::path dir = o.cache_dir.empty() ? fs::path(default_cache_dir()) : fs::path(o.cache_dir);
    fs::create_directories(dir);
    io::CacheKey key = cache_key(o, *fsets);
    fs::path file = dir / key.filename();

    auto existing = io::read_sequence_file(file);
    if (existing) {
        if (existing->theta_text != key.theta_text || existing->norm != key.norm ||
            existing->precision_bits != key.precision_bits)
            throw config_error("cache header mismatch in " + file.string() +
                               ": refusing to mix norms or precisions under one key");
        if (existing->t_reached >= o.tmax) {
            // covered: rebuild record values for the requested prefix
            MinimalSequence seq = enumerate_minimal_points(fsets, norm, o.tmax, ctx, o.workers);
            if (reused)
                *reused = true;
            return seq;
        }
    }
    MinimalSequence seq = enumerate_minimal_points(fsets, norm, o.tmax, ctx, o.workers);
    if (existing) {
        if (existing->vectors.size() > seq.records.size())
            throw error("cache file " + file.string() + " holds more records than the "
                        "re-enumeration produced; refusing to extend");
        for (size_t i = 0; i < existing->vectors.size(); ++i)
            if (!(existing->vectors[i] == seq.records[i].x))
                throw error("cache file " + file.string() +
                            " disagrees with re-enumeration at record " + std::to_string(i + 1));
        io::write_sequence_file(file, seq, existing->vectors.size(), false);
    } else {
        io::write_sequence_file(file, seq, 0, true);
    }
    if (reused)
        *reused = false;
    return seq;
}

void check_abort(const MinimalSequence &seq) {
    for (const auto &n : seq.diag.notes)
        std::cerr << "note: " << n << "\n";
    if (seq.diag.aborted)
        throw precision_error("enumeration aborted: " + seq.diag.abort_reason);
}

int cmd_enumerate(const CommonOpts &o) {
    RealCtx ctx = make_ctx(o);
    auto fsets = make_forms(o);
    print_warnings(*fsets, ctx);
    MinimalSequence seq = cached_enumerate(o, fsets, ctx);
    check_abort(seq);
    std::cout << "records: " << seq.records.size() << "\n";
    if (!seq.records.empty()) {
        std::cout << "X range: " << seq.records.front().X.mid_double() << " .. "
                  << seq.records.back().X.mid_double() << "\n";
        if (seq.records.size() >= 2) {
            auto ratios = sii_ratios(seq);
            std::cout << "last gamma: " << io::fmt_double(ratios.back().second) << "\n";
        }
    }
    return 0;
}

int cmd_analyze(const CommonOpts &o) {
    RealCtx ctx = make_ctx(o);
    auto fsets = make_forms(o);
    MinimalSequence seq = cached_enumerate(o, fsets, ctx);
    check_abort(seq);
    auto cls = classify_triples(seq);
    auto runs = segment_runs(seq, cls);
    BigReal A = fsets->A(ctx);

    io::json report;
    report["theta"] = seq.theta_text;
    report["T"] = seq.t_reached;
    report["A"] = A.to_string();
    report["triples"] = io::triples_to_json(cls);
    report["runs"] = io::runs_to_json(runs);
    io::json wr = io::json::array();
    for (size_t j = 1; j + 1 <= seq.records.size(); ++j)
        wr.push_back({{"j", j}, {"W", wronskian(seq, j, ctx).to_string()}});
    report["wronskian"] = wr;
    io::json ja = io::json::array();
    for (const auto &row : jarnik_report(seq, cls, static_cast<size_t>(o.burn_in)))
        ja.push_back({{"j", row.j}, {"growth", row.growth}, {"decay", row.decay}});
    report["jarnik"] = ja;

    fs::create_directories(o.out_dir);
    std::string stem = io::sanitize(seq.theta_text) + "_T" + std::to_string(seq.t_reached);
    if (o.format != "csv")
        io::write_text(fs::path(o.out_dir) / ("analysis_" + stem + ".json"), report.dump(2) + "\n");
    if (o.format != "json")
        io::write_text(fs::path(o.out_dir) / ("analysis_" + stem + ".csv"),
                       io::analysis_csv(seq, cls, ctx));
    size_t ind = 0;
    for (const auto &c : cls)
        ind += c.independent;
    std::cout << "triples: " << cls.size() << " (independent: " << ind
              << "), runs: " << runs.size() << "\n";
    return 0;
}

int cmd_exponents(const CommonOpts &o) {
    RealCtx ctx = make_ctx(o);
    auto fsets = make_forms(o);
    MinimalSequence seq = cached_enumerate(o, fsets, ctx);
    check_abort(seq);
    TheoremVerdict v = verdict(seq, o.slack, static_cast<size_t>(o.burn_in));
    fs::create_directories(o.out_dir);
    std::string stem = io::sanitize(seq.theta_text) + "_T" + std::to_string(seq.t_reached);
    if (o.format != "csv")
        io::write_text(fs::path(o.out_dir) / ("verdict_" + stem + ".json"),
                       io::verdict_to_json(v, seq.theta_text, seq.t_reached).dump(2) + "\n");
    if (o.format != "json")
        io::write_text(fs::path(o.out_dir) / ("samples_" + stem + ".csv"), io::samples_csv(seq));
    std::cout << "omega_hat = " << io::fmt_double(v.omega_hat.value)
              << ", omega_LP = " << io::fmt_double(v.omega_lp.value)
              << ", floor = " << io::fmt_double(v.floor) << ", slack = " << v.slack << "\n"
              << "consistent_with_theorem: " << (v.consistent_with_theorem ? "true" : "false")
              << "\n";
    return v.consistent_with_theorem ? 0 : 4;
}

int cmd_omega_star(const CommonOpts &o) {
    RealCtx ctx = make_ctx(o);
    auto tv = std::make_shared<ThetaValue>(resolve_theta_text(o.theta));
    OmegaStarScan scan = enumerate_approximants(tv, o.hmax, ctx);
    for (const auto &w : scan.warnings)
        std::cerr << "warning: " << w << "\n";
    ExponentEstimate est = estimate_omega_star(scan);
    fs::create_directories(o.out_dir);
    std::string stem = io::sanitize(tv->spec().text()) + "_H" + std::to_string(o.hmax);
    if (o.format != "json")
        io::write_text(fs::path(o.out_dir) / ("approximants_" + stem + ".csv"),
                       io::approximants_csv(scan));
    if (o.format != "csv")
        io::write_text(fs::path(o.out_dir) / ("omega_star_" + stem + ".json"),
                       io::estimate_to_json(est).dump(2) + "\n");
    std::cout << "record-breakers: " << scan.records.size()
              << ", omega_star = " << io::fmt_double(est.value) << "\n";
    return 0;
}

struct LedgerOpts {
    std::string alpha = "5/2";
    std::string r = "9/2";
    std::string beta0 = "6";
    unsigned long iters = 50;
};

int cmd_ledger(const CommonOpts &o, const LedgerOpts &lo, bool with_sequence) {
    LedgerParams params(parse_rational(lo.alpha), parse_rational(lo.r), parse_rational(lo.beta0));
    std::optional<MinimalSequence> seq;
    if (with_sequence) {
        RealCtx ctx = make_ctx(o);
        auto fsets = make_forms(o);
        seq = cached_enumerate(o, fsets, ctx);
        check_abort(*seq);
    }
    ContradictionTrace tr = contradiction_trace(params, lo.iters, seq ? &*seq : nullptr,
                                                static_cast<size_t>(o.burn_in));
    fs::create_directories(o.out_dir);
    std::string stem = io::sanitize(to_string(params.alpha) + "_" + to_string(params.r));
    io::write_text(fs::path(o.out_dir) / ("trace_" + stem + ".json"),
                   io::trace_to_json(tr).dump(2) + "\n");
    if (tr.contradiction_at)
        std::cout << "contradiction detected at iteration " << *tr.contradiction_at << "\n";
    else
        std::cout << "no contradiction within " << lo.iters << " iterations\n";
    return 0;
}

int cmd_gallery(const CommonOpts &o) {
    io::json arr = io::json::array();
    for (const auto &e : builtin_gallery()) {
        io::json exp = io::json::array();
        for (const auto &x : e.expected)
            exp.push_back({{"quantity", x.quantity},
                           {"value", x.value},
                           {"scope", x.is_limit ? "limit" : "desk-scale"},
                           {"source", x.source}});
        arr.push_back(
            {{"name", e.name}, {"spec", e.spec_text}, {"notes", e.notes}, {"expected", exp}});
    }
    fs::create_directories(o.out_dir);
    io::write_text(fs::path(o.out_dir) / "gallery.json", arr.dump(2) + "\n");
    std::cout << arr.dump(2) << "\n";
    return 0;
}

// One-shot pipeline; exit 0 only if the structural property suite passes and
// the Theorem-1 verdict is consistent at the configured slack.
int cmd_verify(const CommonOpts &o, const LedgerOpts &lo) {
    RealCtx ctx = make_ctx(o);
    auto fsets = make_forms(o);
    print_warnings(*fsets, ctx);

    // the omega-star hypothesis is validated before any long enumeration
    std::vector<std::string> hyp_warnings;
    check_omega_star_hypothesis(*fsets->theta1(), o.hmax, hyp_warnings);
    for (const auto &w : hyp_warnings)
        std::cerr << "warning: " << w << "\n";

    std::string stage = "enumerate";
    io::json report;
    try {
        MinimalSequence seq = cached_enumerate(o, fsets, ctx);
        check_abort(seq);
        report["theta"] = seq.theta_text;
        report["T"] = seq.t_reached;
        report["records"] = seq.records.size();

        stage = "analyze";
        auto cls = classify_triples(seq);
        auto runs = segment_runs(seq, cls); // throws on run-integrity violation
        BigReal A = fsets->A(ctx);
        size_t indep = 0;
        for (const auto &c : cls) {
            indep += c.independent;
            auto [dval, dz] = delta(seq, c.j, ctx);
            if (dz != c.det3 || !delta_identity_holds(dval, A, dz, ctx))
                throw error("delta identity failed at j = " + std::to_string(c.j));
        }
        for (const auto &r : runs) {
            for (size_t j = r.nu + 1; j + 1 <= r.k; ++j)
                if (!add(wronskian(seq, j, ctx), wronskian(seq, j - 1, ctx), ctx).contains_zero())
                    throw error("wronskian alternation failed inside run at j = " +
                                std::to_string(j));
            if (!sub(abs_enclosure(wronskian(seq, r.nu, ctx)),
                     abs_enclosure(wronskian(seq, r.k - 1, ctx)), ctx)
                     .contains_zero())
                throw error("wronskian conservation failed on run [" + std::to_string(r.nu) +
                            ", " + std::to_string(r.k) + "]");
        }
        report["independent_triples"] = indep;
        report["runs"] = runs.size();

        stage = "exponents";
        TheoremVerdict v = verdict(seq, o.slack, static_cast<size_t>(o.burn_in));
        report["verdict"] = io::verdict_to_json(v, seq.theta_text, seq.t_reached);

        stage = "omega-star";
        OmegaStarScan scan = enumerate_approximants(fsets->theta1(), o.hmax, ctx);
        ExponentEstimate star = estimate_omega_star(scan);
        report["omega_star"] = io::estimate_to_json(star);
        DiffCheck dc = check_diff(star.value, v.omega_lp.value, o.slack);
        report["diff_check"] = {{"omega_star", dc.omega_star},
                                {"omega_lp", dc.omega_lp},
                                {"slack", dc.slack},
                                {"holds", dc.holds}};

        stage = "ledger";
        LedgerParams params(parse_rational(lo.alpha), parse_rational(lo.r),
                            parse_rational(lo.beta0));
        ContradictionTrace tr =
            contradiction_trace(params, lo.iters, &seq, static_cast<size_t>(o.burn_in));
        report["ledger"] = io::trace_to_json(tr);
        if (!tr.contradiction_at)
            throw error("ledger cross-check found no contradiction within " +
                        std::to_string(lo.iters) + " iterations");

        fs::create_directories(o.out_dir);
        std::string stem = io::sanitize(seq.theta_text) + "_T" + std::to_string(seq.t_reached);
        report["consistent_with_theorem"] = v.consistent_with_theorem;
        io::write_text(fs::path(o.out_dir) / ("verify_" + stem + ".json"), report.dump(2) + "\n");

        std::cout << "verify: records = " << seq.records.size()
                  << ", omega_hat = " << io::fmt_double(v.omega_hat.value)
                  << ", omega_LP = " << io::fmt_double(v.omega_lp.value)
                  << ", floor = " << io::fmt_double(v.floor)
                  << ", omega_star = " << io::fmt_double(star.value) << "\n";
        if (!v.consistent_with_theorem) {
            std::cout << "verdict inconsistent at slack " << v.slack << "\n";
            return 4;
        }
        if (!dc.holds) {
            std::cout << "omega_star < omega_LP - slack: diff check failed\n";
            return 4;
        }
        std::cout << "verify: ok\n";
        return 0;
    } catch (const hypothesis_error &) {
        throw;
    } catch (const config_error &) {
        throw;
    } catch (const precision_error &e) {
        std::cerr << "stage " << stage << ": " << e.what() << "\n";
        return 3;
    } catch (const error &e) {
        std::cerr << "stage " << stage << ": " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"diophant: minimal points, structural lemma checks and Diophantine "
                 "exponents for a linear form in 1, theta1, theta2"};
    app.require_subcommand(1);

    CommonOpts o;
    LedgerOpts lo;

    auto *enumerate = app.add_subcommand("enumerate", "enumerate minimal points into the cache");
    add_common(enumerate, o, true);
    auto *analyze = app.add_subcommand("analyze", "classify triples, runs, delta and wronskian");
    add_common(analyze, o, true);
    auto *exponents = app.add_subcommand("exponents", "estimate omega_hat, omega_LP and verdict");
    add_common(exponents, o, true);
    auto *omega_star = app.add_subcommand("omega-star", "search quadratic approximants");
    add_common(omega_star, o, true);
    omega_star->add_option("--hmax", o.hmax, "height bound for approximants")
        ->check(CLI::PositiveNumber);
    auto *ledger = app.add_subcommand("ledger", "exact-rational contradiction trace");
    add_common(ledger, o, false);
    ledger->add_option("--alpha", lo.alpha, "alpha > 2 (rational)");
    ledger->add_option("--r", lo.r, "r < alpha^2 - alpha + 1 (rational)");
    ledger->add_option("--beta0", lo.beta0, "beta0 >= alpha(alpha-1) (rational)");
    ledger->add_option("--iters", lo.iters, "iterations");
    auto *gallery = app.add_subcommand("gallery", "list the builtin gallery");
    add_common(gallery, o, false);
    auto *verify = app.add_subcommand("verify", "one-shot pipeline with property checks");
    add_common(verify, o, true);
    verify->add_option("--hmax", o.hmax, "height bound for approximants")
        ->check(CLI::PositiveNumber);
    verify->add_option("--alpha", lo.alpha, "ledger alpha");
    verify->add_option("--r", lo.r, "ledger r");
    verify->add_option("--beta0", lo.beta0, "ledger beta0");
    verify->add_option("--iters", lo.iters, "ledger iterations");

    auto started = std::chrono::steady_clock::now();
    try {
        CLI11_PARSE(app, argc, argv);
        int rc = 0;
        if (enumerate->parsed())
            rc = cmd_enumerate(o);
        else if (analyze->parsed())
            rc = cmd_analyze(o);
        else if (exponents->parsed())
            rc = cmd_exponents(o);
        else if (omega_star->parsed())
            rc = cmd_omega_star(o);
        else if (ledger->parsed())
            rc = cmd_ledger(o, lo, !o.theta.empty());
        else if (gallery->parsed())
            rc = cmd_gallery(o);
        else if (verify->parsed())
            rc = cmd_verify(o, lo);
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::cerr << "elapsed: " << secs << " s\n";
        return rc;
    } catch (const config_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hypothesis_error &e) {
        std::cerr << "hypothesis violated: " << e.what() << "\n";
        return 5;
    } catch (const precision_error &e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return 3;
    } catch (const error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
