#pragma once

#include <stdexcept>
#include <string>

namespace slitscat {

// Argument outside the mathematical domain of a function (non-finite input,
// logarithmic singularity, receiver inside a scatterer, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Configuration the requested operation is not defined for, e.g. a filling
// fraction of a non-periodic slit layout.
class UnsupportedConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation exactly at a resonance pole of a modal factor.
class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& what, int order, double wavenumber)
        : std::runtime_error(what), order_(order), wavenumber_(wavenumber) {}

    int order() const noexcept { return order_; }
    double wavenumber() const noexcept { return wavenumber_; }

private:
    int order_;
    double wavenumber_;
};

// Non-finite matrix entry produced during system assembly.
class AssemblyError : public std::runtime_error {
public:
    AssemblyError(const std::string& what, int block_row, int block_col, int row, int col,
                  double frequency)
        : std::runtime_error(what),
          block_row_(block_row),
          block_col_(block_col),
          row_(row),
          col_(col),
          frequency_(frequency) {}

    int block_row() const noexcept { return block_row_; }
    int block_col() const noexcept { return block_col_; }
    int row() const noexcept { return row_; }
    int col() const noexcept { return col_; }
    double frequency() const noexcept { return frequency_; }

private:
    int block_row_, block_col_, row_, col_;
    double frequency_;
};

// Dense solve failed (singular matrix or residual above tolerance).
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double frequency)
        : std::runtime_error(what), frequency_(frequency) {}

    double frequency() const noexcept { return frequency_; }

private:
    double frequency_;
};

// Scatterers overlap or a receiver/source sits where an expansion is invalid.
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace slitscat
