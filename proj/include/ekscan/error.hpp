#pragma once

#include <stdexcept>
#include <string>

namespace ekscan {

enum class ErrorCategory {
    Domain,
    Resource,
    AuditFailure,
    Singularity,
    Contract,
    Usage,
    Storage,
};

inline const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Domain: return "domain";
        case ErrorCategory::Resource: return "resource";
        case ErrorCategory::AuditFailure: return "audit-failure";
        case ErrorCategory::Singularity: return "singularity";
        case ErrorCategory::Contract: return "contract";
        case ErrorCategory::Usage: return "usage";
        case ErrorCategory::Storage: return "storage";
    }
    return "unknown";
}

/// Base of every error the library throws; carries a category that the CLI
/// maps to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorCategory::Domain, w) {}
};
struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(ErrorCategory::Resource, w) {}
};
struct AuditFailure : Error {
    explicit AuditFailure(const std::string& w) : Error(ErrorCategory::AuditFailure, w) {}
};
struct ContractError : Error {
    explicit ContractError(const std::string& w) : Error(ErrorCategory::Contract, w) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorCategory::Usage, w) {}
};
struct StorageError : Error {
    explicit StorageError(const std::string& w) : Error(ErrorCategory::Storage, w) {}
};

/// Vanishing denominator in a character-sum quotient; `index` is the
/// character index j.
struct SingularityError : Error {
    SingularityError(const std::string& w, long long index)
        : Error(ErrorCategory::Singularity, w), index(index) {}
    long long index;
};

}  // namespace ekscan
