#pragma once

// CoefficientTable cache file I/O (included from coeffs.hpp).

#include <fstream>
#include <map>
#include <sstream>

namespace ekscan {

template <class Real>
void CoefficientTable<Real>::save(const std::filesystem::path& path) const {
    namespace cd = cache_detail;
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw StorageError("cannot write coefficient cache " + tmp);
        out << "ekscan-coefficients " << cd::kFormatVersion << "\n";
        out << "bits " << bits() << "\n";
        out << "max_index " << max_index_ << "\n";
        out << "mantissa_bits " << mantissa_bits<Real> << "\n";
        out << "gamma 0 " << cd::encode(gamma_) << "\n";
        out << "gamma1 0 " << cd::encode(gamma1_) << "\n";
        for (int k = 2; k <= max_index_; ++k) out << "zeta_tail " << k << " " << cd::encode(zeta_tail_[k]) << "\n";
        for (int k = 2; k <= max_index_; ++k)
            out << "zeta_prime " << k << " " << cd::encode(zeta_prime_[k]) << "\n";
        for (int k = 2; k <= max_index_; ++k) out << "L " << k << " " << cd::encode(L_[k]) << "\n";
        out << "end\n";
        if (!out) throw StorageError("short write on coefficient cache " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

template <class Real>
std::optional<CoefficientTable<Real>> CoefficientTable<Real>::load(const std::filesystem::path& path,
                                                                   Precision p) {
    namespace cd = cache_detail;
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "ekscan-coefficients" || version != cd::kFormatVersion)
        return std::nullopt;
    std::map<std::string, long long> header;
    for (int i = 0; i < 3; ++i) {
        std::string key;
        long long v = 0;
        if (!(in >> key >> v)) return std::nullopt;
        header[key] = v;
    }
    if (header["bits"] != p.bits() || header["mantissa_bits"] != mantissa_bits<Real> ||
        header["max_index"] != p.table_length())
        return std::nullopt;
    const int max_index = static_cast<int>(header["max_index"]);
    std::vector<Real> z(max_index + 1, Real(0)), zp(max_index + 1, Real(0)), l(max_index + 1, Real(0));
    Real g{0}, g1{0};
    int seen = 0;
    std::string name;
    while (in >> name && name != "end") {
        int idx = 0, exp = 0;
        std::string hex;
        if (!(in >> idx >> hex >> exp)) return std::nullopt;
        if (name == "gamma" || name == "gamma1") {
            (name == "gamma" ? g : g1) = cd::decode<Real>(hex, exp);
        } else {
            if (idx < 2 || idx > max_index) return std::nullopt;
            auto& dst = name == "zeta_tail" ? z : name == "zeta_prime" ? zp : l;
            if (name != "zeta_tail" && name != "zeta_prime" && name != "L") return std::nullopt;
            dst[idx] = cd::decode<Real>(hex, exp);
        }
        ++seen;
    }
    if (name != "end" || seen != 2 + 3 * (max_index - 1)) return std::nullopt;
    CoefficientTable t(p, std::move(z), std::move(zp), std::move(g), std::move(g1));
    // stored L must agree with the recomputed one bit for bit
    for (int k = 2; k <= max_index; ++k)
        if (t.L_[k] != l[k]) return std::nullopt;
    return t;
}

template <class Real>
CoefficientTable<Real> CoefficientTable<Real>::load_or_build(const std::filesystem::path& path,
                                                             Precision p) {
    if (auto t = load(path, p)) return std::move(*t);
    auto t = build(p);
    t.save(path);
    return t;
}

}  // namespace ekscan
