#pragma once

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "diophant/error.hpp"
#include "diophant/exponents.hpp"
#include "diophant/ledger.hpp"
#include "diophant/minimal_points.hpp"
#include "diophant/quadratic.hpp"
#include "diophant/structure.hpp"

namespace diophant {

inline constexpr int kFormatVersion = 1;

namespace io {

using nlohmann::json;

// Deterministic double formatting: shortest round-trip via %.17g.
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline std::string sanitize(const std::string &s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
    return out;
}

// Cache key: theta spec text(s) + norm + precision. One JSONL file per key.
struct CacheKey {
    std::string theta_text;
    std::string theta2_text; // empty in Theorem-2 mode
    std::string p_text;      // empty in Theorem-2 mode
    NormKind norm = NormKind::euclid;
    long precision_bits = 256;

    std::string filename() const {
        std::string base = sanitize(theta_text);
        if (!theta2_text.empty())
            base += "__" + sanitize(theta2_text) + "__P" + sanitize(p_text);
        base += std::string("__") + to_string(norm) + "__p" + std::to_string(precision_bits);
        return base + ".jsonl";
    }
};

inline json record_to_json(const MinimalPointRecord &r) {
    long err = r.L_val.err_bits();
    err = std::max({err, r.P_val.err_bits(), r.F_val.err_bits(), r.X.err_bits()});
    json j;
    j["nu"] = r.nu;
    j["x"] = {r.x.x0.get_str(), r.x.x1.get_str(), r.x.x2.get_str()};
    j["X"] = r.X.to_string();
    j["L"] = r.L_val.to_string();
    j["P"] = r.P_val.to_string();
    j["F"] = r.F_val.to_string();
    j["err_bits"] = err == LONG_MIN ? json(nullptr) : json(err);
    return j;
}

// Appends records [from, end) plus an extent checkpoint when extending.
inline void write_sequence_file(const std::filesystem::path &path, const MinimalSequence &seq,
                                size_t from_record, bool fresh) {
    std::ofstream out(path, fresh ? std::ios::trunc : std::ios::app);
    if (!out)
        throw error("cannot open cache file " + path.string());
    if (fresh) {
        json header;
        header["format_version"] = kFormatVersion;
        header["theta"] = seq.theta_text;
        if (!seq.theta2_text.empty())
            header["theta2"] = seq.theta2_text;
        header["norm"] = to_string(seq.norm);
        header["precision_bits"] = seq.precision_bits;
        header["T_reached"] = seq.t_reached;
        out << header.dump() << "\n";
    }
    for (size_t i = from_record; i < seq.records.size(); ++i)
        out << record_to_json(seq.records[i]).dump() << "\n";
    if (!fresh) {
        json extent;
        extent["extent"] = true;
        extent["T_reached"] = seq.t_reached;
        out << extent.dump() << "\n";
    }
}

struct CachedSequence {
    long t_reached = 0;
    long precision_bits = 256;
    NormKind norm = NormKind::euclid;
    std::string theta_text, theta2_text;
    std::vector<IntVec> vectors;
    size_t record_lines = 0;
};

inline std::optional<CachedSequence> read_sequence_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    std::string line;
    if (!std::getline(in, line))
        return std::nullopt;
    CachedSequence cs;
    json header = json::parse(line);
    if (header.value("format_version", -1) != kFormatVersion)
        throw config_error("cache file " + path.string() + " has an unsupported format version");
    cs.theta_text = header.value("theta", "");
    cs.theta2_text = header.value("theta2", "");
    cs.norm = norm_from_string(header.value("norm", "euclid"));
    cs.precision_bits = header.value("precision_bits", 256L);
    cs.t_reached = header.value("T_reached", 0L);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        json j = json::parse(line);
        if (j.contains("extent")) {
            cs.t_reached = std::max(cs.t_reached, j.value("T_reached", 0L));
            continue;
        }
        auto xs = j.at("x");
        cs.vectors.emplace_back(mpz_class(xs.at(0).get<std::string>()),
                                mpz_class(xs.at(1).get<std::string>()),
                                mpz_class(xs.at(2).get<std::string>()));
        ++cs.record_lines;
    }
    return cs;
}

// ---- analysis / report JSON ------------------------------------------------

inline json triples_to_json(const std::vector<TripleClass> &cls) {
    json arr = json::array();
    for (const auto &c : cls) {
        json j;
        j["j"] = c.j;
        j["kind"] = c.independent ? "independent" : "dependent";
        j["det3"] = c.det3.get_str();
        if (c.t)
            j["t"] = c.t->get_str();
        arr.push_back(j);
    }
    return arr;
}

inline json runs_to_json(const std::vector<DependentRun> &runs) {
    json arr = json::array();
    for (const auto &r : runs)
        arr.push_back({{"nu", r.nu}, {"k", r.k}});
    return arr;
}

inline json estimate_to_json(const ExponentEstimate &e) {
    json j;
    j["kind"] = to_string(e.kind);
    j["value"] = e.value;
    j["window"] = {e.window_begin, e.window_end};
    j["trend"] = to_string(e.trend);
    j["skipped"] = e.skipped;
    json samples = json::array();
    for (const auto &[nu, v] : e.samples)
        samples.push_back({{"nu", nu}, {"value", v}});
    j["samples"] = samples;
    return j;
}

inline json verdict_to_json(const TheoremVerdict &v, const std::string &theta, long T) {
    json j;
    j["theta"] = theta;
    j["T"] = T;
    j["omega_hat"] = estimate_to_json(v.omega_hat);
    j["omega_lp"] = estimate_to_json(v.omega_lp);
    j["floor"] = v.floor;
    j["slack"] = v.slack;
    j["consistent_with_theorem"] = v.consistent_with_theorem;
    j["warnings"] = v.warnings;
    return j;
}

inline json trace_to_json(const ContradictionTrace &tr) {
    json j;
    j["alpha"] = to_string(tr.params.alpha);
    j["r"] = to_string(tr.params.r);
    j["beta0"] = to_string(tr.params.beta0);
    j["iterations"] = tr.beta.empty() ? 0 : tr.beta.size() - 1;
    json bt = json::array(), it = json::array();
    for (const auto &b : tr.beta)
        bt.push_back(to_string(b));
    for (const auto &b : tr.itog1)
        it.push_back(to_string(b));
    j["beta_trace"] = bt;
    j["itog1_trace"] = it;
    j["fixed_point"] = to_string(tr.fixed_point);
    j["monotone_decreasing"] = tr.monotone_decreasing;
    if (tr.contradiction_at)
        j["contradiction_at"] = *tr.contradiction_at;
    else
        j["contradiction_at"] = nullptr;
    if (!tr.predicates.empty()) {
        json pr = json::array();
        for (const auto &row : tr.predicates)
            pr.push_back({{"nu", row.nu},
                          {"r1", row.r1 == PredicateState::holds    ? "holds"
                                 : row.r1 == PredicateState::fails  ? "fails"
                                                                     : "unclear"}});
        j["predicates"] = pr;
    }
    return j;
}

// ---- CSV exports -------------------------------------------------------------

inline void write_text(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw error("cannot open " + path.string());
    out << content;
}

// per-sample CSV for plots: nu, X, L, P, gamma, s
inline std::string samples_csv(const MinimalSequence &seq) {
    RealCtx ctx(seq.precision_bits);
    auto ratios = seq.records.size() >= 2 ? sii_ratios(seq)
                                          : std::vector<std::pair<size_t, double>>{};
    std::ostringstream os;
    os << "nu,X,L,P,gamma,s\n";
    for (size_t i = 0; i < seq.records.size(); ++i) {
        const auto &r = seq.records[i];
        double gamma = i < ratios.size() ? ratios[i].second : 0.0;
        double s = 0.0;
        if (!r.P_val.contains_zero()) {
            double logX = log(r.X, ctx).mid_double();
            if (logX > 0)
                s = (log(abs_enclosure(r.P_val), ctx).mid_double() -
                     log(abs_enclosure(r.L_val), ctx).mid_double()) /
                    logX;
        }
        os << r.nu << "," << fmt_double(r.X.mid_double()) << "," << fmt_double(r.L_val.mid_double())
           << "," << fmt_double(r.P_val.mid_double()) << "," << fmt_double(gamma) << ","
           << fmt_double(s) << "\n";
    }
    return os.str();
}

// flat per-j analysis row for plots
inline std::string analysis_csv(const MinimalSequence &seq, const std::vector<TripleClass> &cls,
                                const RealCtx &ctx) {
    std::ostringstream os;
    os << "j,kind,det3,t,delta_mid,wronskian_mid\n";
    for (const auto &c : cls) {
        auto [dval, dz] = delta(seq, c.j, ctx);
        BigReal w = wronskian(seq, c.j, ctx);
        os << c.j << "," << (c.independent ? "independent" : "dependent") << "," << dz.get_str()
           << "," << (c.t ? c.t->get_str() : "") << "," << fmt_double(dval.mid_double()) << ","
           << fmt_double(w.mid_double()) << "\n";
    }
    return os.str();
}

inline std::string approximants_csv(const OmegaStarScan &scan) {
    std::ostringstream os;
    os << "H,a0,a1,a2,xi,dist,gamma\n";
    for (const auto &r : scan.records) {
        os << r.H << "," << r.a[0] << "," << r.a[1] << "," << r.a[2] << "," << r.xi.to_string()
           << "," << r.dist.to_string() << "," << (r.gamma ? fmt_double(*r.gamma) : "") << "\n";
    }
    return os.str();
}

} // namespace io
} // namespace diophant
