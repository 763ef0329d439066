#pragma once

// Prime-range scans with a resumable on-disk store.
//
// Store directory layout:
//   manifest.json  range, bits, path, shard width, watermark
//   records.bin    "EKSTORE1" header then fixed 96-byte records (little endian)
//   records.csv    human-readable mirror, same fields
//   records.idx    "q offset" per line, rewritten when a scan finishes
//
// Binary record: q u64 | gq gqPlus mOdd mEven mq f64 | argmaxJ u64 | vq errEstimate
// auditRatio f64 | bits u32 | flags u32 | reserved u32 | crc32 u32 (of the first 92 bytes).

#include "ekscan/lfunc.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ekscan {

inline constexpr char kStoreMagic[8] = {'E', 'K', 'S', 'T', 'O', 'R', 'E', '1'};
inline constexpr std::uint32_t kStoreVersion = 1;
inline constexpr std::size_t kRecordBytes = 96;
inline constexpr const char* kStoreEnv = "EKSCAN_STORE";

enum class SpectrumPath { S, T, Both };
std::string path_name(SpectrumPath p);
SpectrumPath parse_path(const std::string& s);

struct StoredRecord {
    EKRecord ek;
    /// Largest measured/bound ratio over the audited sequences; NaN if not sampled.
    double auditRatio = std::numeric_limits<double>::quiet_NaN();
    std::uint32_t bits = 0;
    bool audited() const { return auditRatio == auditRatio; }
};

/// One q through the whole pipeline: sequences, spectrum, aggregates, v(q)
/// and, if `audit`, the round-trip audit (AuditFailure on violation).
struct PipelineOptions {
    int bits = 48;
    SpectrumPath path = SpectrumPath::S;
    bool audit = true;
    std::size_t offset_count = 2089;
    std::uint64_t max_modulus = kDefaultMaxModulus;
    /// Largest allowed |S - T| spectrum difference for path Both.
    double cross_tolerance = 1e-9;
};

StoredRecord compute_record(std::uint64_t q, const PipelineOptions& opts);

struct ScanManifest {
    std::uint64_t qMin = 0, qMax = 0;
    int bits = 0;
    SpectrumPath path = SpectrumPath::S;
    std::uint64_t shardWidth = 0;
    std::uint64_t auditEvery = 0;
    /// Largest q such that every prime in [qMin, q] is stored; qMin - 1 if none.
    std::uint64_t watermark = 0;
    std::uint64_t records = 0;
    bool complete = false;
};

class ResultStore {
public:
    /// Opens (creating if needed) the store directory and loads every valid
    /// record; a torn trailing record is cut off.
    explicit ResultStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    const std::map<std::uint64_t, StoredRecord>& records() const { return recs_; }
    bool contains(std::uint64_t q) const { return recs_.count(q) != 0; }
    std::optional<ScanManifest> manifest() const { return manifest_; }

    /// Serialized append to records.bin and records.csv. A second append of
    /// the same q must be byte-identical, otherwise StorageError.
    void append(const StoredRecord& r);
    void write_manifest(const ScanManifest& m);
    void write_index() const;

    static std::array<unsigned char, kRecordBytes> encode(const StoredRecord& r);
    static StoredRecord decode(const unsigned char* p);

private:
    std::filesystem::path dir_;
    std::map<std::uint64_t, StoredRecord> recs_;
    std::map<std::uint64_t, std::uint64_t> offsets_;
    std::optional<ScanManifest> manifest_;
    std::uint64_t end_ = 0;
    mutable std::mutex mu_;

    void rewrite_csv() const;
};

struct ScanOptions {
    std::uint64_t qMin = 3, qMax = 100;
    int bits = 48;
    SpectrumPath path = SpectrumPath::S;
    unsigned workers = 1;
    std::uint64_t auditEvery = 64;  // 0 disables; 1 audits every q
    std::uint64_t shardWidth = 1 << 16;
    std::uint64_t maxModulus = kDefaultMaxModulus;
    /// Stop (as if interrupted) after this many new records; 0 = no limit.
    std::uint64_t maxRecords = 0;
    std::function<void(const StoredRecord&)> progress;
};

struct ScanResult {
    ScanManifest manifest;
    std::uint64_t computed = 0;  // records written by this call
    std::uint64_t skipped = 0;   // already present
    bool interrupted = false;
};

ScanResult scan(ResultStore& store, const ScanOptions& opts);

/// Largest q in [qMin, qMax] such that every odd prime in [qMin, q] is
/// stored; qMin - 1 if the first one is missing.
std::uint64_t compute_watermark(const ResultStore& store, std::uint64_t qMin, std::uint64_t qMax);

struct BoundViolation {
    std::uint64_t q;
    std::string what;
    double margin;  // negative: amount by which the inequality fails
};

struct BoundsReport {
    std::uint64_t qMax = 0;
    std::uint64_t checked = 0, missing = 0;
    std::vector<BoundViolation> violations;
    double minGq = 0, minGqPlus = 0;  // of G/log q and G+/log q
    std::uint64_t argminGq = 0, argminGqPlus = 0;
    // M_q/loglog q: extremes over q > 3, and the maximum over q > 13
    double minMnorm = 0, maxMnorm = 0, maxMnormAbove13 = 0;
    std::uint64_t argminMnorm = 0, argmaxMnorm = 0, argmaxMnormAbove13 = 0;
    std::uint64_t audited = 0, auditFailures = 0;
    double worstAuditRatio = 0;
    std::array<std::uint64_t, 5> bands{};
    bool ok() const { return violations.empty() && missing == 0; }
};

/// Checks positivity of G_q and G_q^+, 17/20 loglog q < M_q for q > 13 and
/// M_q < 5/4 loglog q for q > 1531, over stored primes up to qMax (0: all).
BoundsReport verify_bounds(const ResultStore& store, std::uint64_t qMax = 0);

enum class ExportKind { EK, EKPlus, MQ, MQNorm, Hist };
ExportKind parse_export_kind(const std::string& s);

/// CSV to `out`. Columns:
///   ek      q,gq,gq_over_logq,vq,band,band_label,bits
///   ekplus  q,gqplus,gqplus_over_logq,vq,band,band_label,bits
///   mq      q,mq,loglogq,lower,upper,argmaxj,bits      (lower = 17/20 loglog q, upper = 5/4 loglog q)
///   mqnorm  q,mq_over_loglogq,lower,upper,bits         (lower = 0.85, upper = 1.25)
///   hist    stat,bin,lo,hi,count,density                  100 bins per statistic,
///           followed by "# stat=... P=... I=... mass=... mean=... sigma=..." lines
void export_plotdata(const ResultStore& store, ExportKind kind, std::ostream& out);

}  // namespace ekscan
