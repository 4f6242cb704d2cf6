#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsurf {

enum class ErrorKind {
    Domain,
    Range,
    Spec,
    Unsupported,
    Singularity,
    Stiffness,
    Geometry,
    Classification,
    SeedWrongSide,
    NotAnUnduloid,
    Seed,
    AmbiguousSeed,
    SearchFailure,
    ArcDegeneracy,
    NoCrossing,
    Closure,
    Parse,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace hsurf
