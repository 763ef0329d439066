#include "ekscan/cli.hpp"

#include "ekscan/accuracy.hpp"
#include "ekscan/offsets.hpp"
#include "ekscan/scanstore.hpp"
#include "ekscan/specfun.hpp"
#include "ekscan/table_cache.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace ekscan {

namespace {

using nlohmann::json;

struct Config {
    int bits = 128;
    bool json = false;
    std::string cache_dir;
    std::string store;
    unsigned workers = 1;
    std::uint64_t audit_every = 64;
    double eps = 0;  // 0: unit roundoff of the transform type
};

long double effective_eps(const Config& c) { return c.eps > 0 ? static_cast<long double>(c.eps) : kTransformEps; }

std::string sci(long double v, int digits = 3) {
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << v;
    return os.str();
}

std::string fixed(double v, int digits = 10) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

int decimal_digits(int bits) { return static_cast<int>(std::ceil(bits * 0.30103)) + 2; }

/// "a/q" or a decimal literal.
template <class Real>
DomainPoint<Real> parse_point(const std::string& s) {
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::size_t used = 0;
        long long a = 0, q = 0;
        try {
            a = std::stoll(s.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument(s);
            q = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1) throw std::invalid_argument(s);
        } catch (const std::logic_error&) {
            throw UsageError("cannot parse argument '" + s + "'");
        }
        return DomainPoint<Real>::from_ratio(a, q);
    }
    Mp100 v;
    try {
        v = Mp100(s);
    } catch (const std::exception&) {
        throw UsageError("cannot parse argument '" + s + "'");
    }
    return DomainPoint<Real>::from_real(narrow<Real>(v));
}

std::string require_store(const Config& c) {
    if (!c.store.empty()) return c.store;
    if (const char* env = std::getenv(kStoreEnv); env && *env) return env;
    throw UsageError(std::string("no store given (use --store or set ") + kStoreEnv + ")");
}

// ---- coeffs ------------------------------------------------------------------

int run_coeffs(const Config& c, const std::string& out_path, std::ostream& out) {
    return dispatch_scalar(c.bits, [&](auto zero) {
        using Real = decltype(zero);
        const auto t = CoefficientTable<Real>::build(Precision(c.bits));
        t.save(out_path);
        if (c.json) {
            out << json{{"bits", c.bits}, {"max_index", t.max_index()}, {"mantissa", mantissa_bits<Real>},
                        {"file", out_path}}.dump() << "\n";
        } else {
            out << "coefficient table k = 2.." << t.max_index() << " written to " << out_path << " bits=" << c.bits
                << " mantissa=" << mantissa_bits<Real> << "\n";
        }
        return kExitOk;
    });
}

// ---- eval --------------------------------------------------------------------

int run_eval(const Config& c, const std::string& fn, const std::string& xs, std::ostream& out) {
    return dispatch_scalar(c.bits, [&](auto zero) {
        using Real = decltype(zero);
        const auto& t = *shared_table<Real>(c.bits);
        const auto p = parse_point<Real>(xs);
        EvalResult<Real> r;
        if (fn == "S") r = deninger_s(p, c.bits, t);
        else if (fn == "T") r = deninger_t(p, c.bits, t);
        else if (fn == "R") r = log_gamma1(p, c.bits, t);
        else if (fn == "psi1") r = psi1(p, c.bits, t);
        else if (fn == "loggamma") r = log_gamma(p, c.bits, t);
        else if (fn == "digamma") r = digamma(p, c.bits, t);
        else if (fn == "sreflect") r = s_reflect_sum(p, c.bits, t);
        else throw UsageError("unknown function '" + fn + "'");
        const int digits = decimal_digits(c.bits);
        const std::string err = to_string(r.error_bound, 3);
        if (c.json) {
            out << json{{"fn", fn}, {"x", xs}, {"bits", c.bits}, {"value", to_string(r.value, digits)},
                        {"error_bound", err}, {"terms_used", r.terms_used}}.dump() << "\n";
        } else {
            out << fn << "(" << xs << ") = " << to_string(r.value, digits) << " bits=" << c.bits << " err<=" << err
                << " terms=" << r.terms_used << "\n";
        }
        return kExitOk;
    });
}

// ---- ek ----------------------------------------------------------------------

int run_ek(const Config& c, std::uint64_t q, const std::string& path_s, std::ostream& out) {
    const auto path = parse_path(path_s);
    const auto ctx = prime_context(q);
    CharacterSpectrum sp;
    std::optional<double> cross;
    if (path == SpectrumPath::T) {
        sp = lderiv_spectrum_T(ctx, c.bits);
    } else {
        sp = lderiv_spectrum_S(ctx, build_sequences(ctx, c.bits));
        if (path == SpectrumPath::Both)
            cross = static_cast<double>(max_spectrum_difference(sp, lderiv_spectrum_T(ctx, c.bits)));
    }
    auto r = ek_aggregate(sp, ctx);
    r.vq = v_score(q, greedy_offsets(kDefaultOffsetCount)).v;
    const double lq = std::log(static_cast<double>(q)), llq = std::log(lq);
    if (c.json) {
        json j{{"q", r.q},           {"bits", c.bits},       {"path", path_name(path)},  {"gq", r.gq},
               {"gqPlus", r.gqPlus}, {"mOdd", r.mOdd},       {"mEven", r.mEven},         {"mq", r.mq},
               {"argmaxJ", r.argmaxJ}, {"vq", r.vq},         {"errEstimate", r.errEstimate},
               {"gq_over_logq", r.gq / lq}, {"gqPlus_over_logq", r.gqPlus / lq}, {"mq_over_loglogq", r.mq / llq},
               {"principalResidual", static_cast<double>(sp.principal_residual)}};
        if (cross) j["crossPathDiscrepancy"] = *cross;
        out << j.dump() << "\n";
        return kExitOk;
    }
    const std::string tail = " bits=" + std::to_string(c.bits) + " err<=" + sci(r.errEstimate) + "\n";
    out << "q = " << q << " g = " << ctx.g << " path=" << path_name(path) << "\n";
    out << "G_q = " << fixed(r.gq, 15) << " G_q/log q = " << fixed(r.gq / lq) << tail;
    out << "G_q+ = " << fixed(r.gqPlus, 15) << " G_q+/log q = " << fixed(r.gqPlus / lq) << tail;
    out << "M_q = " << fixed(r.mq, 15) << " M_q/loglog q = " << fixed(r.mq / llq) << " argmax j = " << r.argmaxJ
        << tail;
    out << "M_odd = " << fixed(r.mOdd, 15) << " M_even = " << fixed(r.mEven, 15) << tail;
    out << "v(q) = " << fixed(r.vq) << " band " << v_band_label(v_band(r.vq)) << "\n";
    if (cross) out << "S/T max discrepancy = " << sci(*cross) << " bits=" << c.bits << "\n";
    return kExitOk;
}

// ---- scan / verify / export --------------------------------------------------

int run_scan(const Config& c, ScanOptions o, std::ostream& out) {
    ResultStore store(require_store(c));
    o.bits = c.bits;
    o.workers = c.workers;
    o.auditEvery = c.audit_every;
    const auto res = scan(store, o);
    const auto& m = res.manifest;
    if (c.json) {
        out << json{{"store", store.dir().string()}, {"bits", m.bits}, {"path", path_name(m.path)},
                    {"from", m.qMin}, {"to", m.qMax}, {"computed", res.computed}, {"skipped", res.skipped},
                    {"records", m.records}, {"watermark", m.watermark}, {"complete", m.complete},
                    {"interrupted", res.interrupted}}.dump() << "\n";
    } else {
        out << "scan [" << m.qMin << ", " << m.qMax << "] bits=" << m.bits << " path=" << path_name(m.path)
            << ": computed " << res.computed << ", skipped " << res.skipped << ", records " << m.records
            << ", watermark " << m.watermark << (m.complete ? " (complete)" : " (incomplete)") << "\n";
    }
    return kExitOk;
}

int run_verify(const Config& c, std::uint64_t qmax, std::ostream& out) {
    const ResultStore store(require_store(c));
    const auto rep = verify_bounds(store, qmax);
    const int bits = store.manifest() ? store.manifest()->bits : 0;
    const double total = std::max<double>(1, static_cast<double>(rep.checked));
    if (c.json) {
        json v = json::array();
        for (const auto& x : rep.violations) v.push_back({{"q", x.q}, {"check", x.what}, {"margin", x.margin}});
        json bands = json::array();
        for (auto n : rep.bands) bands.push_back(n);
        out << json{{"bits", bits},
                    {"qMax", rep.qMax},
                    {"checked", rep.checked},
                    {"missing", rep.missing},
                    {"violations", v},
                    {"minGqOverLogq", {{"value", rep.minGq}, {"q", rep.argminGq}}},
                    {"minGqPlusOverLogq", {{"value", rep.minGqPlus}, {"q", rep.argminGqPlus}}},
                    {"minMqOverLoglogq", {{"value", rep.minMnorm}, {"q", rep.argminMnorm}}},
                    {"maxMqOverLoglogq", {{"value", rep.maxMnorm}, {"q", rep.argmaxMnorm}}},
                    {"maxMqOverLoglogqAbove13", {{"value", rep.maxMnormAbove13}, {"q", rep.argmaxMnormAbove13}}},
                    {"audited", rep.audited},
                    {"auditFailures", rep.auditFailures},
                    {"worstAuditRatio", rep.worstAuditRatio},
                    {"bands", bands},
                    {"ok", rep.ok()}}
                   .dump()
            << "\n";
    } else {
        out << "checked " << rep.checked << " primes up to " << rep.qMax << " bits=" << bits << ", missing "
            << rep.missing << "\n";
        out << "min G_q/log q = " << fixed(rep.minGq) << " at q = " << rep.argminGq << "\n";
        out << "min G_q+/log q = " << fixed(rep.minGqPlus) << " at q = " << rep.argminGqPlus << "\n";
        out << "M_q/loglog q: min " << fixed(rep.minMnorm) << " at q = " << rep.argminMnorm << ", max "
            << fixed(rep.maxMnorm) << " at q = " << rep.argmaxMnorm << ", max beyond 13 "
            << fixed(rep.maxMnormAbove13) << " at q = " << rep.argmaxMnormAbove13 << "\n";
        out << "audited " << rep.audited << ", failures " << rep.auditFailures << ", worst error/bound "
            << fixed(rep.worstAuditRatio, 4) << "\n";
        for (int b = 0; b < 5; ++b)
            out << "band " << v_band_label(b) << ": " << rep.bands[b] << " ("
                << fixed(100.0 * static_cast<double>(rep.bands[b]) / total, 4) << "%)\n";
        for (const auto& x : rep.violations)
            out << "VIOLATION q = " << x.q << " " << x.what << " margin " << sci(x.margin) << "\n";
        out << (rep.ok() ? "all checks passed" : "verification FAILED") << "\n";
    }
    return rep.ok() ? kExitOk : kExitAudit;
}

int run_export(const Config& c, const std::string& kind, const std::string& file, std::ostream& out) {
    const auto k = parse_export_kind(kind);
    const ResultStore store(require_store(c));
    if (file.empty()) {
        export_plotdata(store, k, out);
    } else {
        std::ofstream f(file);
        if (!f) throw StorageError("cannot open " + file);
        export_plotdata(store, k, f);
    }
    return kExitOk;
}

// ---- offsets / vscore --------------------------------------------------------

int run_offsets(const Config& c, std::size_t count, const std::string& fmt_s, std::ostream& out) {
    const auto s = greedy_offsets(count);
    const double m = count > 1 ? m_of(std::span(s.b).subspan(1)) : 0;
    if (fmt_s == "csv") {
        out << "i,b\n";
        for (std::size_t i = 0; i < s.count(); ++i) out << i + 1 << "," << s.b[i] << "\n";
    } else if (c.json) {
        out << json{{"count", count}, {"b", s.b}, {"m_without_first", m}}.dump() << "\n";
    } else if (fmt_s == "text") {
        for (std::size_t i = 0; i < s.count(); ++i) out << (i ? " " : "") << s.b[i];
        out << "\nm(b(2.." << count << ")) = " << fixed(m, 12) << "\n";
    } else {
        throw UsageError("--out must be text or csv");
    }
    return kExitOk;
}

int run_vscore(const Config& c, std::uint64_t q, std::size_t count, std::ostream& out) {
    const auto seq = greedy_offsets(count);
    const auto v = v_score(q, seq, count);
    if (c.json) {
        out << json{{"q", q}, {"v", v.v}, {"count", count}, {"contributing", v.contributing},
                    {"band", v_band_label(v_band(v.v))}, {"primality", method_name(v.method)},
                    {"rounds", v.rounds}}.dump() << "\n";
    } else {
        out << "v(" << q << ") = " << fixed(v.v, 12) << " over b(2.." << count << "), " << v.contributing.size()
            << " contributing offsets, band " << v_band_label(v_band(v.v)) << ", primality " << method_name(v.method)
            << " (" << v.rounds << " rounds)\n";
    }
    return kExitOk;
}

// ---- audit -------------------------------------------------------------------

int run_audit(const Config& c, std::uint64_t q, const std::string& fmt_s, std::ostream& out) {
    const auto ctx = prime_context(q);
    const auto bundle = build_sequences(ctx, c.bits);
    const auto rep = audit_sequences(bundle, nullptr, effective_eps(c));
    const auto cf = norm_closed_forms(q, c.bits);
    if (fmt_s == "csv") {
        out << "q,N,bits,eps,delta,seq,l2,linf,E2,Einf,relE2,boundE2,boundEinf,pass\n";
        for (const auto& [name, r] : rep.round_trip) {
            const auto& n = rep.norms.at(name);
            out << q << "," << rep.N << "," << c.bits << "," << sci(rep.eps, 6) << "," << sci(rep.delta, 6) << ","
                << name << "," << sci(n.l2, 12) << "," << sci(n.linf, 12) << "," << sci(r.e2) << "," << sci(r.einf)
                << "," << sci(r.rel_e2) << "," << sci(r.bound2) << "," << sci(r.bound_inf) << ","
                << (r.within() ? 1 : 0) << "\n";
        }
    } else if (c.json) {
        json seqs = json::object();
        for (const auto& [name, r] : rep.round_trip) {
            const auto& n = rep.norms.at(name);
            seqs[name] = {{"l2", static_cast<double>(n.l2)},        {"linf", static_cast<double>(n.linf)},
                          {"E2", static_cast<double>(r.e2)},        {"Einf", static_cast<double>(r.einf)},
                          {"relE2", static_cast<double>(r.rel_e2)}, {"boundE2", static_cast<double>(r.bound2)},
                          {"boundEinf", static_cast<double>(r.bound_inf)}, {"pass", r.within()}};
        }
        out << json{{"q", q},
                    {"N", rep.N},
                    {"bits", c.bits},
                    {"eps", static_cast<double>(rep.eps)},
                    {"delta", static_cast<double>(rep.delta)},
                    {"closedForms",
                     {{"x_l2", static_cast<double>(cf.x_l2)}, {"y_inf", static_cast<double>(cf.y_inf)},
                      {"z_inf", static_cast<double>(cf.z_inf)}, {"w_inf", static_cast<double>(cf.w_inf)}}},
                    {"sequences", seqs},
                    {"pass", rep.passed()}}
                   .dump()
            << "\n";
    } else if (fmt_s == "text") {
        out << "q = " << q << " N = " << rep.N << " bits=" << c.bits << " eps = " << sci(rep.eps) << " delta = "
            << sci(rep.delta) << "\n";
        out << "closed forms: |x|_2 = " << fixed(static_cast<double>(cf.x_l2), 12)
            << " |y|_inf = " << fixed(static_cast<double>(cf.y_inf), 12)
            << " |z|_inf = " << fixed(static_cast<double>(cf.z_inf), 12)
            << " |w|_inf = " << fixed(static_cast<double>(cf.w_inf), 12) << " bits=" << c.bits << "\n";
        for (const auto& [name, r] : rep.round_trip) {
            const auto& n = rep.norms.at(name);
            out << name << ": |.|_2 = " << sci(n.l2, 10) << " |.|_inf = " << sci(n.linf, 10) << " E2 = " << sci(r.e2)
                << " (bound " << sci(r.bound2) << ") Einf = " << sci(r.einf) << " (bound " << sci(r.bound_inf)
                << ") relE2 = " << sci(r.rel_e2) << " bits=" << c.bits << (r.within() ? " ok" : " EXCEEDED") << "\n";
        }
    } else {
        throw UsageError("--format must be text or csv");
    }
    return rep.passed() ? kExitOk : kExitAudit;
}

}  // namespace

int exit_code_for(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Usage: return kExitUsage;
        case ErrorCategory::Domain: return kExitDomain;
        case ErrorCategory::Resource: return kExitResource;
        case ErrorCategory::AuditFailure: return kExitAudit;
        case ErrorCategory::Singularity: return kExitSingularity;
        default: return kExitOther;
    }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Euler-Kronecker constants and L'/L(1, chi) for prime moduli", "ekscan"};
    app.require_subcommand(1);
    Config c;
    app.add_option("--cache-dir", c.cache_dir, "directory for coefficient table cache files");

    // each subcommand keeps its own default
    std::map<CLI::App*, int> bits;
    auto add_bits = [&](CLI::App* s, int def) {
        bits[s] = def;
        s->add_option("--bits", bits[s], "target precision in bits")->capture_default_str()->check(CLI::Range(16, 256));
    };
    auto add_json = [&](CLI::App* s) { s->add_flag("--json", c.json, "machine-readable output"); };
    auto add_store = [&](CLI::App* s) {
        s->add_option("--store", c.store, std::string("store directory (default $") + kStoreEnv + ")");
    };

    std::string out_path, fn, xs, path = "S", kind, file, fmt_s = "text";
    std::uint64_t q = 0, qmax = 0;
    std::size_t count = kDefaultOffsetCount;
    ScanOptions so;

    auto* coeffs = app.add_subcommand("coeffs", "build and save a coefficient table");
    add_bits(coeffs, 128);
    add_json(coeffs);
    coeffs->add_option("--out", out_path, "output file")->required();

    auto* eval = app.add_subcommand("eval", "evaluate one special function");
    add_bits(eval, 128);
    add_json(eval);
    eval->add_option("--fn", fn, "function")
        ->required()
        ->check(CLI::IsMember({"S", "T", "R", "psi1", "loggamma", "digamma", "sreflect"}));
    eval->add_option("--x", xs, "argument, A/Q or decimal")->required();

    auto* ek = app.add_subcommand("ek", "Euler-Kronecker constants and M_q for one prime");
    add_bits(ek, 128);
    add_json(ek);
    ek->add_option("--q", q, "odd prime modulus")->required();
    ek->add_option("--path", path, "S, T or both")->check(CLI::IsMember({"S", "T", "both"}));

    auto* scn = app.add_subcommand("scan", "scan a prime range into a store");
    add_bits(scn, 48);
    add_json(scn);
    add_store(scn);
    scn->add_option("--from", so.qMin, "smallest modulus")->required();
    scn->add_option("--to", so.qMax, "largest modulus")->required();
    scn->add_option("--workers", c.workers, "worker threads")->default_val(1u)->check(CLI::Range(1u, 1024u));
    scn->add_option("--path", path, "S, T or both")->check(CLI::IsMember({"S", "T", "both"}));
    scn->add_option("--audit-every", c.audit_every, "round-trip audit sampling (0 = off)")->default_val(64);
    scn->add_option("--shard-width", so.shardWidth, "modulus range per shard")->default_val(so.shardWidth);
    scn->add_option("--max-modulus", so.maxModulus, "largest modulus the store accepts")->default_val(so.maxModulus);
    scn->add_option("--max-records", so.maxRecords, "stop after this many new records (interruption test)");

    auto* ver = app.add_subcommand("verify", "check stored results against the M_q bounds and positivity");
    add_json(ver);
    add_store(ver);
    ver->add_option("--qmax", qmax, "check primes up to this value (default: all)");

    auto* exp = app.add_subcommand("export", "write plot data as CSV");
    add_store(exp);
    exp->add_option("--kind", kind, "ek, ekplus, mq, mqnorm or hist")->required();
    exp->add_option("--file", file, "write to this file instead of stdout");

    auto* off = app.add_subcommand("offsets", "greedy prime offsets");
    add_json(off);
    off->add_option("--count", count, "number of offsets")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    off->add_option("--out", fmt_s, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    auto* vs = app.add_subcommand("vscore", "candidate score v(q)");
    add_json(vs);
    vs->add_option("--q", q, "odd prime")->required();
    vs->add_option("--count", count, "offsets used")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));

    auto* aud = app.add_subcommand("audit", "FFT accuracy report for one prime");
    add_bits(aud, 128);
    add_json(aud);
    aud->add_option("--q", q, "odd prime modulus")->required();
    aud->add_option("--eps", c.eps, "override the machine epsilon of the error model");
    aud->add_option("--format", fmt_s, "text or csv")->check(CLI::IsMember({"text", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (!c.cache_dir.empty()) set_coefficient_cache_dir(c.cache_dir);
        for (const auto& [sub, b] : bits)
            if (*sub) c.bits = b;
        if (*coeffs) return run_coeffs(c, out_path, out);
        if (*eval) return run_eval(c, fn, xs, out);
        if (*ek) return run_ek(c, q, path, out);
        if (*scn) {
            so.path = parse_path(path);
            return run_scan(c, so, out);
        }
        if (*ver) return run_verify(c, qmax, out);
        if (*exp) return run_export(c, kind, file, out);
        if (*off) return run_offsets(c, count, fmt_s, out);
        if (*vs) return run_vscore(c, q, count, out);
        if (*aud) return run_audit(c, q, fmt_s, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const SingularityError& e) {
        err << "error [singularity, character " << e.index << "]: " << e.what() << "\n";
        return kExitSingularity;
    } catch (const Error& e) {
        err << "error [" << category_name(e.category()) << "]: " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitUsage;
}

}  // namespace ekscan
