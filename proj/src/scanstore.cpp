#include "ekscan/scanstore.hpp"

#include "ekscan/accuracy.hpp"
#include "ekscan/offsets.hpp"
#include "ekscan/primes.hpp"

#include <boost/crc.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <iterator>
#include <thread>

namespace ekscan {

static_assert(std::endian::native == std::endian::little, "record layout assumes a little-endian host");

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kHeaderBytes = 16;
constexpr const char* kCsvHeader = "q,gq,gqPlus,mOdd,mEven,mq,argmaxJ,vq,errEstimate,auditRatio,bits";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_line(const StoredRecord& r) {
    const auto& e = r.ek;
    return std::to_string(e.q) + "," + fmt(e.gq) + "," + fmt(e.gqPlus) + "," + fmt(e.mOdd) + "," + fmt(e.mEven) +
           "," + fmt(e.mq) + "," + std::to_string(e.argmaxJ) + "," + fmt(e.vq) + "," + fmt(e.errEstimate) + "," +
           fmt(r.auditRatio) + "," + std::to_string(r.bits);
}

std::uint32_t crc32(const unsigned char* p, std::size_t n) {
    boost::crc_32_type c;
    c.process_bytes(p, n);
    return c.checksum();
}

template <class T>
void put(unsigned char*& p, T v) {
    std::memcpy(p, &v, sizeof v);
    p += sizeof v;
}

template <class T>
T get(const unsigned char*& p) {
    T v;
    std::memcpy(&v, p, sizeof v);
    p += sizeof v;
    return v;
}

const OffsetSequence& shared_offsets(std::size_t count) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<OffsetSequence>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[count];
    if (!slot) slot = std::make_unique<OffsetSequence>(greedy_offsets(count));
    return *slot;
}

std::vector<std::uint64_t> odd_primes(std::uint64_t lo, std::uint64_t hi) {
    auto p = primes_between(std::max<std::uint64_t>(lo, 3), hi);
    return p;
}

nlohmann::json to_json(const ScanManifest& m) {
    return {{"format", "ekscan-store"},
            {"version", kStoreVersion},
            {"qMin", m.qMin},
            {"qMax", m.qMax},
            {"bits", m.bits},
            {"path", path_name(m.path)},
            {"shardWidth", m.shardWidth},
            {"auditEvery", m.auditEvery},
            {"watermark", m.watermark},
            {"records", m.records},
            {"complete", m.complete}};
}

ScanManifest from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "ekscan-store" || j.value("version", 0u) != kStoreVersion)
        throw StorageError("unrecognised manifest format");
    ScanManifest m;
    m.qMin = j.at("qMin");
    m.qMax = j.at("qMax");
    m.bits = j.at("bits");
    m.path = parse_path(j.at("path"));
    m.shardWidth = j.value("shardWidth", std::uint64_t{0});
    m.auditEvery = j.value("auditEvery", std::uint64_t{0});
    m.watermark = j.at("watermark");
    m.records = j.value("records", std::uint64_t{0});
    m.complete = j.value("complete", false);
    return m;
}

}  // namespace

std::string path_name(SpectrumPath p) {
    switch (p) {
        case SpectrumPath::S: return "S";
        case SpectrumPath::T: return "T";
        case SpectrumPath::Both: return "both";
    }
    return "?";
}

SpectrumPath parse_path(const std::string& s) {
    if (s == "S") return SpectrumPath::S;
    if (s == "T") return SpectrumPath::T;
    if (s == "both") return SpectrumPath::Both;
    throw UsageError("unknown path '" + s + "' (expected S, T or both)");
}

// ---- single q ----------------------------------------------------------------

StoredRecord compute_record(std::uint64_t q, const PipelineOptions& o) {
    const auto ctx = prime_context(q, o.max_modulus);
    StoredRecord out;
    out.bits = static_cast<std::uint32_t>(o.bits);
    std::optional<SequenceBundle> bundle;
    std::optional<TransformPlan> half;
    if (o.path != SpectrumPath::T || o.audit) {
        bundle = build_sequences(ctx, o.bits);
        half = plan(ctx.N, Direction::Forward);
    }
    CharacterSpectrum sp;
    if (o.path == SpectrumPath::T) {
        sp = lderiv_spectrum_T(ctx, o.bits);
    } else {
        sp = lderiv_spectrum_S(ctx, *bundle, &*half);
        if (o.path == SpectrumPath::Both) {
            const auto diff = static_cast<double>(max_spectrum_difference(sp, lderiv_spectrum_T(ctx, o.bits)));
            if (!(diff <= o.cross_tolerance))
                throw ContractError("S and T spectra differ by " + fmt(diff) + " for q = " + std::to_string(q));
        }
    }
    if (!(sp.principal_residual < 1e-12))
        throw ContractError("principal-slot sums miss their closed forms for q = " + std::to_string(q));
    out.ek = ek_aggregate(sp, ctx);
    out.ek.vq = v_score(q, shared_offsets(o.offset_count), o.offset_count).v;
    if (o.audit) {
        const auto rep = audit_sequences(*bundle, &*half);
        double worst = 0;
        for (const auto& [name, r] : rep.round_trip) {
            if (r.bound2 > 0) worst = std::max(worst, static_cast<double>(r.e2 / r.bound2));
            if (r.bound_inf > 0) worst = std::max(worst, static_cast<double>(r.einf / r.bound_inf));
        }
        out.auditRatio = worst;
        rep.enforce();
    }
    return out;
}

// ---- store -------------------------------------------------------------------

std::array<unsigned char, kRecordBytes> ResultStore::encode(const StoredRecord& r) {
    std::array<unsigned char, kRecordBytes> b{};
    unsigned char* p = b.data();
    put(p, r.ek.q);
    for (double v : {r.ek.gq, r.ek.gqPlus, r.ek.mOdd, r.ek.mEven, r.ek.mq}) put(p, v);
    put(p, r.ek.argmaxJ);
    for (double v : {r.ek.vq, r.ek.errEstimate, r.auditRatio}) put(p, v);
    put(p, r.bits);
    put(p, std::uint32_t{r.audited() ? 1u : 0u});
    put(p, std::uint32_t{0});
    put(p, crc32(b.data(), kRecordBytes - 4));
    return b;
}

StoredRecord ResultStore::decode(const unsigned char* p) {
    const unsigned char* start = p;
    StoredRecord r;
    r.ek.q = get<std::uint64_t>(p);
    r.ek.gq = get<double>(p);
    r.ek.gqPlus = get<double>(p);
    r.ek.mOdd = get<double>(p);
    r.ek.mEven = get<double>(p);
    r.ek.mq = get<double>(p);
    r.ek.argmaxJ = get<std::uint64_t>(p);
    r.ek.vq = get<double>(p);
    r.ek.errEstimate = get<double>(p);
    r.auditRatio = get<double>(p);
    r.bits = get<std::uint32_t>(p);
    get<std::uint32_t>(p);
    get<std::uint32_t>(p);
    if (get<std::uint32_t>(p) != crc32(start, kRecordBytes - 4)) throw StorageError("record checksum mismatch");
    return r;
}

ResultStore::ResultStore(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw StorageError("cannot create store directory " + dir_.string() + ": " + ec.message());
    const auto bin = dir_ / "records.bin";
    if (!fs::exists(bin)) {
        std::ofstream f(bin, std::ios::binary);
        unsigned char h[kHeaderBytes];
        unsigned char* p = h;
        std::memcpy(p, kStoreMagic, 8);
        p += 8;
        put(p, kStoreVersion);
        put(p, static_cast<std::uint32_t>(kRecordBytes));
        f.write(reinterpret_cast<const char*>(h), kHeaderBytes);
        if (!f) throw StorageError("cannot write " + bin.string());
    }
    std::ifstream f(bin, std::ios::binary);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (data.size() < kHeaderBytes || std::memcmp(data.data(), kStoreMagic, 8) != 0)
        throw StorageError(bin.string() + " is not an ekscan record file");
    const unsigned char* hp = data.data() + 8;
    if (get<std::uint32_t>(hp) != kStoreVersion || get<std::uint32_t>(hp) != kRecordBytes)
        throw StorageError(bin.string() + ": unsupported record version");
    std::uint64_t off = kHeaderBytes;
    for (; off + kRecordBytes <= data.size(); off += kRecordBytes) {
        StoredRecord r;
        try {
            r = decode(data.data() + off);
        } catch (const StorageError&) {
            break;
        }
        recs_[r.ek.q] = r;
        offsets_[r.ek.q] = off;
    }
    end_ = off;
    bool rewrite = false;
    if (off != data.size()) {  // torn or corrupt tail
        f.close();
        fs::resize_file(bin, off);
        rewrite = true;
    }
    const auto csv = dir_ / "records.csv";
    if (!rewrite) {
        std::ifstream c(csv);
        std::size_t lines = 0;
        for (std::string s; std::getline(c, s);) ++lines;
        rewrite = lines != recs_.size() + 1;
    }
    if (rewrite) rewrite_csv();
    if (fs::exists(dir_ / "manifest.json")) {
        std::ifstream m(dir_ / "manifest.json");
        try {
            manifest_ = from_json(nlohmann::json::parse(m));
        } catch (const nlohmann::json::exception& e) {
            throw StorageError("bad manifest.json: " + std::string(e.what()));
        }
    }
}

void ResultStore::rewrite_csv() const {
    // records in file order so the mirror matches records.bin line by line
    std::vector<std::pair<std::uint64_t, std::uint64_t>> order;
    for (const auto& [q, off] : offsets_) order.emplace_back(off, q);
    std::sort(order.begin(), order.end());
    std::ofstream c(dir_ / "records.csv", std::ios::trunc);
    c << kCsvHeader << "\n";
    for (const auto& [off, q] : order) c << csv_line(recs_.at(q)) << "\n";
    if (!c) throw StorageError("cannot write records.csv");
}

void ResultStore::append(const StoredRecord& r) {
    std::lock_guard lock(mu_);
    const auto bytes = encode(r);
    if (auto it = recs_.find(r.ek.q); it != recs_.end()) {
        if (encode(it->second) != bytes)
            throw StorageError("conflicting record for q = " + std::to_string(r.ek.q));
        return;
    }
    {
        std::ofstream f(dir_ / "records.bin", std::ios::binary | std::ios::app);
        f.write(reinterpret_cast<const char*>(bytes.data()), kRecordBytes);
        f.flush();
        if (!f) throw StorageError("write to records.bin failed");
    }
    {
        std::ofstream c(dir_ / "records.csv", std::ios::app);
        c << csv_line(r) << "\n";
        if (!c) throw StorageError("write to records.csv failed");
    }
    recs_[r.ek.q] = r;
    offsets_[r.ek.q] = end_;
    end_ += kRecordBytes;
}

void ResultStore::write_manifest(const ScanManifest& m) {
    std::lock_guard lock(mu_);
    const auto tmp = dir_ / "manifest.json.tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        f << to_json(m).dump(2) << "\n";
        if (!f) throw StorageError("cannot write manifest");
    }
    fs::rename(tmp, dir_ / "manifest.json");
    manifest_ = m;
}

void ResultStore::write_index() const {
    std::lock_guard lock(mu_);
    std::ofstream f(dir_ / "records.idx", std::ios::trunc);
    for (const auto& [q, off] : offsets_) f << q << " " << off << "\n";
    if (!f) throw StorageError("cannot write records.idx");
}

std::uint64_t compute_watermark(const ResultStore& store, std::uint64_t qMin, std::uint64_t qMax) {
    std::uint64_t wm = qMin - 1;
    for (auto p : odd_primes(qMin, qMax)) {
        if (!store.contains(p)) return wm;
        wm = p;
    }
    return qMax;
}

// ---- scan --------------------------------------------------------------------

ScanResult scan(ResultStore& store, const ScanOptions& o) {
    if (o.qMin < 3 || o.qMin > o.qMax) throw DomainError("scan range must satisfy 3 <= from <= to");
    if (o.qMax > o.maxModulus) throw ResourceError("scan limit exceeds the configured maximum modulus");
    if (o.workers == 0) throw UsageError("need at least one worker");
    if (o.shardWidth == 0) throw UsageError("shard width must be positive");

    ScanManifest m;
    if (auto old = store.manifest()) {
        if (old->bits != o.bits || old->path != o.path)
            throw UsageError("store holds bits=" + std::to_string(old->bits) + " path=" + path_name(old->path) +
                             " records; rerun with the same settings or use a new store");
        m = *old;
        m.qMin = std::min(m.qMin, o.qMin);
        m.qMax = std::max(m.qMax, o.qMax);
    } else {
        m.qMin = o.qMin;
        m.qMax = o.qMax;
        m.bits = o.bits;
        m.path = o.path;
    }
    m.shardWidth = o.shardWidth;
    m.auditEvery = o.auditEvery;
    m.complete = false;
    m.watermark = compute_watermark(store, m.qMin, m.qMax);
    m.records = store.records().size();
    store.write_manifest(m);

    PipelineOptions po;
    po.bits = o.bits;
    po.path = o.path;
    po.max_modulus = o.maxModulus;
    shared_offsets(po.offset_count);  // build once before the workers start

    ScanResult res;
    std::atomic<std::uint64_t> written{0}, reserved{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex fail_mu;

    const auto primes = odd_primes(o.qMin, o.qMax);
    auto shard_begin = primes.begin();
    while (shard_begin != primes.end() && !stop) {
        const std::uint64_t shard_end_q = *shard_begin - (*shard_begin - o.qMin) % o.shardWidth + o.shardWidth;
        auto shard_end = std::lower_bound(shard_begin, primes.end(), shard_end_q);
        // largest first: per-q cost grows with q
        std::vector<std::uint64_t> todo;
        for (auto it = shard_end; it != shard_begin;) {
            --it;
            if (store.contains(*it))
                ++res.skipped;
            else
                todo.push_back(*it);
        }
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            while (!stop) {
                const std::size_t i = next++;
                if (i >= todo.size()) return;
                const std::uint64_t q = todo[i];
                try {
                    PipelineOptions local = po;
                    local.audit = o.auditEvery != 0 && ((q - 1) / 2) % o.auditEvery == 0;
                    const auto rec = compute_record(q, local);
                    if (o.maxRecords && reserved++ >= o.maxRecords) {
                        stop = true;  // simulated interruption: drop the result
                        return;
                    }
                    store.append(rec);
                    ++written;
                    if (o.progress) o.progress(rec);
                } catch (...) {
                    std::lock_guard lock(fail_mu);
                    if (!failure) failure = std::current_exception();
                    stop = true;
                }
            }
        };
        const unsigned n = std::min<unsigned>(o.workers, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();

        m.watermark = compute_watermark(store, m.qMin, m.qMax);
        m.records = store.records().size();
        store.write_manifest(m);
        shard_begin = shard_end;
    }
    res.computed = written;
    res.interrupted = stop && !failure;
    m.watermark = compute_watermark(store, m.qMin, m.qMax);
    m.records = store.records().size();
    m.complete = m.watermark == m.qMax;
    store.write_manifest(m);
    store.write_index();
    res.manifest = m;
    if (failure) std::rethrow_exception(failure);
    return res;
}

// ---- verification ------------------------------------------------------------

BoundsReport verify_bounds(const ResultStore& store, std::uint64_t qMax) {
    BoundsReport rep;
    const auto man = store.manifest();
    if (qMax == 0) qMax = store.records().empty() ? 0 : store.records().rbegin()->first;
    rep.qMax = qMax;
    if (man && qMax >= man->qMin) {
        for (auto p : odd_primes(man->qMin, std::min(qMax, man->qMax)))
            if (!store.contains(p)) ++rep.missing;
    }
    rep.minGq = rep.minGqPlus = rep.minMnorm = std::numeric_limits<double>::infinity();
    rep.maxMnorm = rep.maxMnormAbove13 = -std::numeric_limits<double>::infinity();
    for (const auto& [q, r] : store.records()) {
        if (q > qMax) break;
        ++rep.checked;
        const double lq = std::log(static_cast<double>(q)), llq = std::log(lq);
        const auto& e = r.ek;
        if (!(e.gq > 0)) rep.violations.push_back({q, "G_q > 0", e.gq});
        if (!(e.gqPlus > 0)) rep.violations.push_back({q, "G_q^+ > 0", e.gqPlus});
        if (q > 13 && !(e.mq > 0.85 * llq)) rep.violations.push_back({q, "M_q > 17/20 loglog q", e.mq - 0.85 * llq});
        if (q > 1531 && !(e.mq < 1.25 * llq)) rep.violations.push_back({q, "M_q < 5/4 loglog q", 1.25 * llq - e.mq});
        if (e.gq / lq < rep.minGq) rep.minGq = e.gq / lq, rep.argminGq = q;
        if (e.gqPlus / lq < rep.minGqPlus) rep.minGqPlus = e.gqPlus / lq, rep.argminGqPlus = q;
        if (q > 3) {
            const double mn = e.mq / llq;
            if (mn < rep.minMnorm) rep.minMnorm = mn, rep.argminMnorm = q;
            if (mn > rep.maxMnorm) rep.maxMnorm = mn, rep.argmaxMnorm = q;
            if (q > 13 && mn > rep.maxMnormAbove13) rep.maxMnormAbove13 = mn, rep.argmaxMnormAbove13 = q;
        }
        if (r.audited()) {
            ++rep.audited;
            rep.worstAuditRatio = std::max(rep.worstAuditRatio, r.auditRatio);
            if (r.auditRatio > 1) ++rep.auditFailures;
        }
        if (e.vq == e.vq) ++rep.bands[v_band(e.vq)];
    }
    for (const auto& [q, r] : store.records()) {
        if (q > qMax) break;
        if (r.audited() && r.auditRatio > 1) rep.violations.push_back({q, "round-trip audit", 1 - r.auditRatio});
    }
    return rep;
}

// ---- export ------------------------------------------------------------------

ExportKind parse_export_kind(const std::string& s) {
    if (s == "ek") return ExportKind::EK;
    if (s == "ekplus") return ExportKind::EKPlus;
    if (s == "mq") return ExportKind::MQ;
    if (s == "mqnorm") return ExportKind::MQNorm;
    if (s == "hist") return ExportKind::Hist;
    throw UsageError("unknown export kind '" + s + "' (expected ek, ekplus, mq, mqnorm or hist)");
}

namespace {

void histogram(std::ostream& out, const char* stat, const std::vector<double>& v) {
    constexpr int kBins = 100;
    if (v.empty()) return;
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = hi > lo ? (hi - lo) / kBins : 1.0 / kBins;
    std::vector<std::uint64_t> counts(kBins, 0);
    long double sum = 0, sum2 = 0;
    for (double x : v) {
        const int b = std::min(kBins - 1, static_cast<int>((x - lo) / width));
        ++counts[b];
        sum += x;
    }
    const long double mean = sum / v.size();
    for (double x : v) sum2 += (x - mean) * (x - mean);
    const double sigma = static_cast<double>(std::sqrt(sum2 / v.size()));
    const double P = static_cast<double>(v.size());
    for (int b = 0; b < kBins; ++b)
        out << stat << "," << b << "," << fmt(lo + b * width) << "," << fmt(lo + (b + 1) * width) << "," << counts[b]
            << "," << fmt(counts[b] / (P * width)) << "\n";
    out << "# stat=" << stat << " P=" << v.size() << " I=" << fmt(width) << " mass=" << fmt(width * P)
        << " mean=" << fmt(static_cast<double>(mean)) << " sigma=" << fmt(sigma) << "\n";
}

}  // namespace

void export_plotdata(const ResultStore& store, ExportKind kind, std::ostream& out) {
    const auto& recs = store.records();
    switch (kind) {
        case ExportKind::EK:
        case ExportKind::EKPlus: {
            const bool plus = kind == ExportKind::EKPlus;
            out << (plus ? "q,gqplus,gqplus_over_logq,vq,band,band_label,bits\n" : "q,gq,gq_over_logq,vq,band,band_label,bits\n");
            for (const auto& [q, r] : recs) {
                const double g = plus ? r.ek.gqPlus : r.ek.gq;
                const int band = v_band(r.ek.vq);
                out << q << "," << fmt(g) << "," << fmt(g / std::log(static_cast<double>(q))) << "," << fmt(r.ek.vq)
                    << "," << band << "," << v_band_label(band) << "," << r.bits << "\n";
            }
            break;
        }
        case ExportKind::MQ:
            out << "q,mq,loglogq,lower,upper,argmaxj,bits\n";
            for (const auto& [q, r] : recs) {
                const double llq = std::log(std::log(static_cast<double>(q)));
                out << q << "," << fmt(r.ek.mq) << "," << fmt(llq) << "," << fmt(0.85 * llq) << "," << fmt(1.25 * llq)
                    << "," << r.ek.argmaxJ << "," << r.bits << "\n";
            }
            break;
        case ExportKind::MQNorm:
            out << "q,mq_over_loglogq,lower,upper,bits\n";
            for (const auto& [q, r] : recs) {
                const double llq = std::log(std::log(static_cast<double>(q)));
                out << q << "," << fmt(r.ek.mq / llq) << ",0.85,1.25," << r.bits << "\n";
            }
            break;
        case ExportKind::Hist: {
            out << "stat,bin,lo,hi,count,density\n";
            std::vector<double> g, gp;
            for (const auto& [q, r] : recs) {
                const double lq = std::log(static_cast<double>(q));
                g.push_back(r.ek.gq / lq);
                gp.push_back(r.ek.gqPlus / lq);
            }
            histogram(out, "ek", g);
            histogram(out, "ekplus", gp);
            break;
        }
    }
}

}  // namespace ekscan
