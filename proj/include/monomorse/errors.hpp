#pragma once

#include <stdexcept>
#include <string>

namespace monomorse {

enum class ErrorKind {
    Config,
    Io,
    Domain,
    Index,
    NonMonogenicQuaternion,
    ZeroQuaternion,
    EmptyLadder,
    NonFiniteInput,
    DegenerateOrientation,
    ZeroEnergy,
    OffRidge,
    QuadratureFailure,
    NyquistViolation,
    Alias,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Index: return "IndexError";
    case ErrorKind::NonMonogenicQuaternion: return "NonMonogenicQuaternion";
    case ErrorKind::ZeroQuaternion: return "ZeroQuaternion";
    case ErrorKind::EmptyLadder: return "EmptyLadder";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::DegenerateOrientation: return "DegenerateOrientation";
    case ErrorKind::ZeroEnergy: return "ZeroEnergy";
    case ErrorKind::OffRidge: return "OffRidge";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NyquistViolation: return "NyquistViolation";
    case ErrorKind::Alias: return "AliasError";
    }
    return "Error";
}

/// Library error carrying a machine-readable kind and the module that raised it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& what)
        : std::runtime_error(module + ": " + to_string(kind) + ": " + what),
          kind_(kind),
          module_(std::move(module)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

}  // namespace monomorse
