#include <doctest.h>

#include "ekscan/scanstore.hpp"
#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace ekscan;
using testing::TempDir;

namespace {

ScanOptions small_range(std::uint64_t hi = 100) {
    ScanOptions o;
    o.qMin = 3;
    o.qMax = hi;
    o.auditEvery = 4;
    return o;
}

std::size_t line_count(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::size_t n = 0;
    std::string s;
    while (std::getline(f, s)) ++n;
    return n;
}

}  // namespace

TEST_SUITE("scanstore") {

TEST_CASE("path and kind parsing") {
    CHECK(parse_path("S") == SpectrumPath::S);
    CHECK(parse_path("T") == SpectrumPath::T);
    CHECK(parse_path("both") == SpectrumPath::Both);
    CHECK(path_name(SpectrumPath::Both) == "both");
    CHECK_THROWS_AS(parse_path("X"), UsageError);
    CHECK(parse_export_kind("mqnorm") == ExportKind::MQNorm);
    CHECK_THROWS_AS(parse_export_kind("scatter"), UsageError);
}

TEST_CASE("record encoding round trip") {
    PipelineOptions o;
    const auto r = compute_record(1531, o);
    CHECK(r.audited());
    CHECK(r.auditRatio < 1);
    CHECK(std::abs(r.ek.mq - 2.5048094) < 1e-6);
    CHECK(r.ek.vq == r.ek.vq);
    const auto bytes = ResultStore::encode(r);
    const auto back = ResultStore::decode(bytes.data());
    CHECK(ResultStore::encode(back) == bytes);
    auto bad = bytes;
    bad[10] ^= 1;
    CHECK_THROWS_AS(ResultStore::decode(bad.data()), StorageError);
}

TEST_CASE("both paths cross-check") {
    PipelineOptions o;
    o.path = SpectrumPath::Both;
    o.audit = false;
    const auto r = compute_record(211, o);
    CHECK_FALSE(r.audited());
    CHECK(r.ek.gq > 0);
}

TEST_CASE("scan, rerun and verify") {
    TempDir dir("scan");
    ResultStore store(dir.path);
    const auto res = scan(store, small_range());
    CHECK(res.computed == 24);
    CHECK(res.manifest.complete);
    CHECK(res.manifest.watermark == 100);
    CHECK(store.records().size() == 24);
    CHECK(line_count(dir.path / "records.csv") == 25);
    CHECK(line_count(dir.path / "records.idx") == 24);

    const auto again = scan(store, small_range());
    CHECK(again.computed == 0);
    CHECK(again.skipped == 24);

    ResultStore reopened(dir.path);
    CHECK(reopened.records().size() == 24);
    REQUIRE(reopened.manifest().has_value());
    CHECK(reopened.manifest()->bits == 48);

    const auto rep = verify_bounds(reopened);
    CHECK(rep.ok());
    CHECK(rep.checked == 24);
    CHECK(rep.argminMnorm == 13);
    CHECK(std::abs(rep.minMnorm - 0.7392305) < 1e-6);
    CHECK(rep.audited > 0);
    CHECK(rep.auditFailures == 0);
    for (const auto& [q, r] : reopened.records()) {
        CHECK(r.ek.gq > 0);
        CHECK(r.ek.gqPlus > 0);
    }
    // q = 3 is the overall maximum of M_q / loglog q
    CHECK(reopened.records().at(3).ek.mq / std::log(std::log(3.0)) == doctest::Approx(3.9158971).epsilon(1e-7));
}

TEST_CASE("interrupted scan resumes exactly the missing primes") {
    TempDir dir("resume");
    {
        ResultStore store(dir.path);
        auto o = small_range();
        o.maxRecords = 10;
        const auto r = scan(store, o);
        CHECK(r.interrupted);
        CHECK(r.computed == 10);
        CHECK_FALSE(r.manifest.complete);
    }
    ResultStore store(dir.path);
    CHECK(store.records().size() == 10);
    const auto r = scan(store, small_range());
    CHECK(r.computed == 14);
    CHECK(r.skipped == 10);
    CHECK(r.manifest.complete);
    CHECK(compute_watermark(store, 3, 100) == 100);
}

TEST_CASE("scans are deterministic") {
    TempDir a("det-a"), b("det-b");
    ResultStore sa(a.path), sb(b.path);
    auto o = small_range(200);
    scan(sa, o);
    o.workers = 3;
    o.shardWidth = 50;
    scan(sb, o);
    REQUIRE(sa.records().size() == sb.records().size());
    for (const auto& [q, r] : sa.records()) CHECK(ResultStore::encode(r) == ResultStore::encode(sb.records().at(q)));
}

TEST_CASE("torn tail is cut off") {
    TempDir dir("torn");
    {
        ResultStore store(dir.path);
        scan(store, small_range(50));
    }
    const auto bin = dir.path / "records.bin";
    const auto size = std::filesystem::file_size(bin);
    {
        std::ofstream f(bin, std::ios::binary | std::ios::app);
        f << "partial record";
    }
    ResultStore store(dir.path);
    CHECK(store.records().size() == 14);
    CHECK(std::filesystem::file_size(bin) == size);
    CHECK(line_count(dir.path / "records.csv") == 15);
}

TEST_CASE("duplicate appends") {
    TempDir dir("dup");
    ResultStore store(dir.path);
    PipelineOptions o;
    o.bits = 48;
    auto r = compute_record(101, o);
    store.append(r);
    CHECK_NOTHROW(store.append(r));
    CHECK(store.records().size() == 1);
    r.ek.gq += 1;
    CHECK_THROWS_AS(store.append(r), StorageError);
}

TEST_CASE("mismatched settings and bad ranges") {
    TempDir dir("mismatch");
    ResultStore store(dir.path);
    scan(store, small_range(30));
    auto o = small_range(60);
    o.bits = 64;
    CHECK_THROWS_AS(scan(store, o), UsageError);
    o = small_range(60);
    o.path = SpectrumPath::T;
    CHECK_THROWS_AS(scan(store, o), UsageError);
    o = small_range(60);
    o.qMin = 70;
    CHECK_THROWS_AS(scan(store, o), DomainError);
    o = small_range(60);
    o.workers = 0;
    CHECK_THROWS_AS(scan(store, o), UsageError);
    // extending the range keeps the union
    const auto r = scan(store, small_range(60));
    CHECK(r.manifest.qMin == 3);
    CHECK(r.manifest.qMax == 60);
    CHECK(r.computed == 7);
}

TEST_CASE("exports") {
    TempDir dir("export");
    ResultStore empty(dir.path / "empty");
    std::ostringstream e;
    export_plotdata(empty, ExportKind::EK, e);
    CHECK(e.str() == "q,gq,gq_over_logq,vq,band,band_label,bits\n");

    ResultStore store(dir.path / "full");
    scan(store, small_range(200));
    const std::size_t n = store.records().size();
    for (auto kind : {ExportKind::EK, ExportKind::EKPlus, ExportKind::MQ, ExportKind::MQNorm}) {
        std::ostringstream os;
        export_plotdata(store, kind, os);
        const std::string text = os.str();
        CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == n + 1);
    }
    std::ostringstream h;
    export_plotdata(store, ExportKind::Hist, h);
    std::istringstream in(h.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "stat,bin,lo,hi,count,density");
    std::uint64_t total = 0;
    double density_mass = 0;
    int summaries = 0;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            ++summaries;
            CHECK(line.find("mean=") != std::string::npos);
            CHECK(line.find("sigma=") != std::string::npos);
            continue;
        }
        std::istringstream f(line);
        std::string stat, bin, lo, hi, count, dens;
        std::getline(f, stat, ',');
        std::getline(f, bin, ',');
        std::getline(f, lo, ',');
        std::getline(f, hi, ',');
        std::getline(f, count, ',');
        std::getline(f, dens, ',');
        if (stat == "ek") {
            total += std::stoull(count);
            density_mass += std::stod(dens) * (std::stod(hi) - std::stod(lo));
        }
    }
    CHECK(summaries == 2);
    CHECK(total == n);
    CHECK(density_mass == doctest::Approx(1.0));
}

}  // TEST_SUITE
