#pragma once

#include <stdexcept>
#include <string>

namespace alcontact {

/// The discrete problem has no unknowns or no contact cells.
class invalid_problem : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class assembly_error : public std::runtime_error
{
public:
    assembly_error(const std::string& what, long element)
        : std::runtime_error(what), element_(element)
    {}

    long element() const noexcept { return element_; }

private:
    long element_;
};

/// Raised when a Newton linearization cannot be factorized.
class solver_error : public std::runtime_error
{
public:
    solver_error(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration)
    {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

} // namespace alcontact
