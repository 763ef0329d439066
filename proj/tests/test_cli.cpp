#include <doctest.h>

#include "ekscan/cli.hpp"
#include "ekscan/scanstore.hpp"
#include "support.hpp"

#include <json.hpp>
#include <cstdlib>
#include <sstream>

using namespace ekscan;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ekscan");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json as_json(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes by category") {
    CHECK(exit_code_for(ErrorCategory::Usage) == 2);
    CHECK(exit_code_for(ErrorCategory::Domain) == 3);
    CHECK(exit_code_for(ErrorCategory::Resource) == 4);
    CHECK(exit_code_for(ErrorCategory::AuditFailure) == 5);
    CHECK(exit_code_for(ErrorCategory::Singularity) == 6);
    CHECK(exit_code_for(ErrorCategory::Storage) == 1);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    const auto bad = run({"eval", "--fn", "zeta", "--x", "1/2"});
    CHECK(bad.code == kExitUsage);
    CHECK(bad.err.find("eval") != std::string::npos);
    CHECK(run({"eval", "--fn", "S", "--x", "1/2", "--bits", "8"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("eval") {
    const auto r = run({"eval", "--fn", "S", "--x", "1/2", "--bits", "128"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.4922106421520629486793254663") != std::string::npos);
    CHECK(r.out.find("bits=128") != std::string::npos);
    CHECK(r.out.find("err<=") != std::string::npos);
    const auto j = as_json(run({"eval", "--fn", "T", "--x", "0.25", "--bits", "64", "--json"}));
    const auto want = oracle::T(testing::OReal("0.25"));
    CHECK(std::abs(std::stold(j["value"].get<std::string>()) - want.convert_to<long double>()) < 1e-18L);
    CHECK(j["bits"] == 64);
    CHECK(j["terms_used"].get<int>() > 0);
    CHECK(run({"eval", "--fn", "loggamma", "--x", "3/2"}).code == kExitDomain);
    CHECK(run({"eval", "--fn", "S", "--x", "-1"}).code == kExitDomain);
    CHECK(run({"eval", "--fn", "S", "--x", "abc"}).code == kExitUsage);
}

TEST_CASE("ek") {
    const auto j = as_json(run({"ek", "--q", "1531", "--bits", "64", "--path", "both", "--json"}));
    CHECK(std::abs(j["mq"].get<double>() - 2.5048094) < 1e-6);
    CHECK(j["crossPathDiscrepancy"].get<double>() < 1e-10);
    const auto text = run({"ek", "--q", "19", "--bits", "64"});
    CHECK(text.code == 0);
    CHECK(text.out.find("1.626934") != std::string::npos);
    CHECK(run({"ek", "--q", "15"}).code == kExitDomain);
}

TEST_CASE("offsets and vscore") {
    const auto o = run({"offsets", "--count", "4"});
    CHECK(o.out.rfind("0 2 6 8\n", 0) == 0);
    const auto csv = run({"offsets", "--count", "3", "--out", "csv"});
    CHECK(csv.out == "i,b\n1,0\n2,2\n3,6\n");
    const auto v = as_json(run({"vscore", "--q", "50040955631", "--json"}));
    CHECK(std::abs(v["v"].get<double>() - 1.2194) < 1e-3);
}

TEST_CASE("audit") {
    const auto ok = run({"audit", "--q", "1009", "--bits", "64"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("bits=64") != std::string::npos);
    const auto csv = run({"audit", "--q", "101", "--bits", "64", "--format", "csv"});
    CHECK(csv.out.rfind("q,N,bits,eps,delta,seq", 0) == 0);
    CHECK(run({"audit", "--q", "1009", "--bits", "64", "--eps", "1e-40"}).code == kExitAudit);
}

TEST_CASE("scan, verify and export through the store variable") {
    testing::TempDir dir("cli");
    const auto store = (dir.path / "store").string();
    ::setenv(kStoreEnv, store.c_str(), 1);
    const auto s = run({"scan", "--from", "3", "--to", "100", "--workers", "2"});
    CHECK(s.code == 0);
    CHECK(s.out.find("bits=48") != std::string::npos);
    const auto v = run({"verify", "--json"});
    CHECK(v.code == 0);
    CHECK(as_json(v)["violations"].empty());
    const auto e = run({"export", "--kind", "mq"});
    CHECK(e.out.rfind("q,mq,loglogq,lower,upper,argmaxj,bits\n", 0) == 0);
    CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 25);
    CHECK(run({"export", "--kind", "pie"}).code == kExitUsage);
    CHECK(run({"scan", "--from", "3", "--to", "100", "--bits", "64"}).code == kExitUsage);
    ::unsetenv(kStoreEnv);
    CHECK(run({"verify"}).code == kExitUsage);
}

TEST_CASE("coeffs") {
    testing::TempDir dir("cli-coeffs");
    const auto file = (dir.path / "t.txt").string();
    const auto r = run({"coeffs", "--bits", "64", "--out", file});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(file));
    CHECK(CoefficientTable<Mp50>::load(file, Precision(64)).has_value());
}

}  // TEST_SUITE
