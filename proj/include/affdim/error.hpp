#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affdim {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

/// An enumeration would exceed the configured word cap.
class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::size_t cap)
        : Error("word budget exceeded (cap " + std::to_string(cap) + ")"), cap_(cap) {}
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

class NotDominated : public PreconditionFailed {
public:
    NotDominated() : PreconditionFailed("system is not certified dominated") {}
};

class NotSeparated : public PreconditionFailed {
public:
    NotSeparated() : PreconditionFailed("strong separation is not certified") {}
};

class HypothesisViolated : public PreconditionFailed {
public:
    using PreconditionFailed::PreconditionFailed;
};

class NotConverged : public Error {
public:
    explicit NotConverged(int iters)
        : Error("power iteration did not converge in " + std::to_string(iters) + " iterations") {}
};

class Inconclusive : public Error {
public:
    using Error::Error;
};

class PlacementFailed : public Error {
public:
    using Error::Error;
};

/// A search finished without a certificate; not a proof of absence.
class NotFound : public Error {
public:
    using Error::Error;
};

class DegenerateRange : public Error {
public:
    using Error::Error;
};

} // namespace affdim
