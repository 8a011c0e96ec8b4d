#pragma once

#include <stdexcept>
#include <string>

namespace fuzzdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MetricViolation : Error {
    std::string axiom;  // "square", "diagonal", "symmetry", "positivity", "triangle"
    int i = -1, j = -1, k = -1;
    MetricViolation(std::string ax, std::string msg, int i_ = -1, int j_ = -1, int k_ = -1)
        : Error(std::move(msg)), axiom(std::move(ax)), i(i_), j(j_), k(k_) {}
};

struct EmptySpace : Error {
    EmptySpace() : Error("metric space must contain at least one point") {}
};

struct SpaceMismatch : Error {
    SpaceMismatch() : Error("operands live over different metric spaces") {}
};

struct SpaceTooLarge : Error {
    using Error::Error;
};

struct GridTooLarge : Error {
    using Error::Error;
};

struct AlphaOutOfRange : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct InvalidFuzzySet : Error {
    using Error::Error;
};

struct InvalidUnitFunction : Error {
    using Error::Error;
};

struct NotNormal : Error {
    NotNormal() : Error("fuzzy set does not attain membership 1") {}
};

struct PreconditionViolated : Error {
    using Error::Error;
};

struct DegenerateDelta : Error {
    DegenerateDelta() : Error("delta must be positive") {}
};

struct NotApplicable : Error {
    using Error::Error;
};

struct LatticeIncomplete : Error {
    using Error::Error;
};

struct BallNotEnumerable : Error {
    using Error::Error;
};

struct ProbeSpaceTooLarge : Error {
    using Error::Error;
};

struct EngineMismatch : Error {
    using Error::Error;
};

struct ScenarioInvalid : Error {
    std::string field;
    ScenarioInvalid(std::string f, const std::string& reason)
        : Error("scenario field '" + f + "': " + reason), field(std::move(f)) {}
};

struct CapExceeded : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace fuzzdyn
