#pragma once
#include <stdexcept>
#include <string>

namespace mairy {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct ConfluentSpectrum : std::runtime_error {
    explicit ConfluentSpectrum(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateFit : std::runtime_error {
    explicit DegenerateFit(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidGrid : std::runtime_error {
    explicit InvalidGrid(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mairy
