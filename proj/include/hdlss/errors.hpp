#ifndef HDLSS_ERRORS_HPP
#define HDLSS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdlss {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's domain.
class InputError : public Error {
public:
    using Error::Error;
};

/// An iterative routine did not reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A configured size cap (dense d x d work) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A principal component was requested whose eigenvalue is zero or
/// whose index lies outside the defined range.
class UndefinedComponentError : public Error {
public:
    using Error::Error;
};

class NotPositiveSemidefiniteError : public Error {
public:
    NotPositiveSemidefiniteError(std::size_t pivot, double value)
        : Error("matrix is not positive semidefinite: pivot " + std::to_string(pivot) +
                " is " + std::to_string(value) + " after maximum jitter"),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

}  // namespace hdlss

#endif  // HDLSS_ERRORS_HPP
