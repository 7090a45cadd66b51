#ifndef GMI_CORE_HPP
#define GMI_CORE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace gmi {

// Complex field amplitude of a single port mode.
using amplitude = std::complex<double>;

inline bool finite_amplitude(const amplitude& a) {
    return std::isfinite(a.real()) && std::isfinite(a.imag());
}

/// Complex amplitude vector over the port modes of a device. Indexing with
/// operator[] is zero-based; functions that speak about physical ports use
/// one-based port numbers, matching the port labels in the README diagram.
class OpticalState {
public:
    explicit OpticalState(int dim) : amps_(checked_dim(dim)) {}

    OpticalState(std::initializer_list<amplitude> amps)
        : amps_(amps) {
        if (amps_.empty())
            throw invalid_parameter("optical state needs at least one port");
        for (const amplitude& a : amps_) check_entry(a);
    }

    // Unit excitation of one port (one-based).
    static OpticalState unit_input(int dim, int port) {
        OpticalState s(dim);
        if (port < 1 || port > dim)
            throw invalid_parameter("input port " + std::to_string(port) +
                                    " out of range 1.." + std::to_string(dim));
        s.amps_[static_cast<std::size_t>(port - 1)] = amplitude(1.0, 0.0);
        return s;
    }

    int dim() const { return static_cast<int>(amps_.size()); }

    amplitude operator[](int i) const { return amps_[static_cast<std::size_t>(i)]; }

    void set(int i, const amplitude& v) {
        check_entry(v);
        amps_[static_cast<std::size_t>(i)] = v;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const amplitude& a : amps_) s += std::norm(a);
        return s;
    }

    double norm() const { return std::sqrt(norm_sq()); }

private:
    static std::vector<amplitude> checked_dim(int dim) {
        if (dim < 1)
            throw invalid_parameter("optical state needs at least one port");
        return std::vector<amplitude>(static_cast<std::size_t>(dim));
    }

    static void check_entry(const amplitude& a) {
        if (!finite_amplitude(a))
            throw invalid_data("non-finite amplitude rejected");
    }

    std::vector<amplitude> amps_;
};

/// Square matrix of scattering amplitudes over port modes. Row index is the
/// output port, column index the input port. Losslessness is a checkable
/// property (`is_unitary`), not a construction invariant: attenuated
/// matrices are ordinary values.
class ScatteringMatrix {
public:
    explicit ScatteringMatrix(int dim)
        : dim_(checked_dim(dim)),
          m_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

    static ScatteringMatrix identity(int dim) {
        ScatteringMatrix s(dim);
        for (int i = 0; i < dim; ++i) s.set(i, i, amplitude(1.0, 0.0));
        return s;
    }

    static ScatteringMatrix from_rows(std::initializer_list<std::initializer_list<amplitude>> rows) {
        const int n = static_cast<int>(rows.size());
        ScatteringMatrix s(n);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != n)
                throw dimension_error("scattering matrix rows must be square");
            int j = 0;
            for (const amplitude& a : row) s.set(i, j++, a);
            ++i;
        }
        return s;
    }

    int dim() const { return dim_; }

    amplitude operator()(int row, int col) const {
        return m_[static_cast<std::size_t>(row) * static_cast<std::size_t>(dim_) +
                  static_cast<std::size_t>(col)];
    }

    void set(int row, int col, const amplitude& v) {
        if (!finite_amplitude(v))
            throw invalid_data("non-finite matrix entry rejected");
        m_[static_cast<std::size_t>(row) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(col)] = v;
    }

    ScatteringMatrix adjoint() const {
        ScatteringMatrix out(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                out.set(i, j, std::conj((*this)(j, i)));
        return out;
    }

    friend ScatteringMatrix operator*(const ScatteringMatrix& a, const ScatteringMatrix& b) {
        if (a.dim() != b.dim())
            throw dimension_error("matrix product needs equal port counts");
        ScatteringMatrix out(a.dim());
        for (int i = 0; i < a.dim(); ++i) {
            for (int j = 0; j < a.dim(); ++j) {
                amplitude acc(0.0, 0.0);
                for (int k = 0; k < a.dim(); ++k) acc += a(i, k) * b(k, j);
                out.set(i, j, acc);
            }
        }
        return out;
    }

private:
    static int checked_dim(int dim) {
        if (dim < 2)
            throw invalid_parameter("scattering matrix needs at least two ports");
        return dim;
    }

    int dim_;
    std::vector<amplitude> m_;
};

// Largest entrywise deviation of S†S from the identity.
inline double unitarity_defect(const ScatteringMatrix& s) {
    const int n = s.dim();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            amplitude acc(0.0, 0.0);
            for (int k = 0; k < n; ++k) acc += std::conj(s(k, i)) * s(k, j);
            const amplitude target = (i == j) ? amplitude(1.0, 0.0) : amplitude(0.0, 0.0);
            worst = std::max(worst, std::abs(acc - target));
        }
    }
    return worst;
}

inline bool is_unitary(const ScatteringMatrix& s, double tol = 1e-10) {
    if (!(tol > 0.0))
        throw invalid_parameter("unitarity tolerance must be positive");
    return unitarity_defect(s) <= tol;
}

/// Matrix-vector action; the input state is left untouched.
inline OpticalState apply(const ScatteringMatrix& s, const OpticalState& psi) {
    if (s.dim() != psi.dim())
        throw dimension_error("matrix has " + std::to_string(s.dim()) +
                              " ports but state has " + std::to_string(psi.dim()));
    OpticalState out(s.dim());
    for (int i = 0; i < s.dim(); ++i) {
        amplitude acc(0.0, 0.0);
        for (int j = 0; j < s.dim(); ++j) acc += s(i, j) * psi[j];
        out.set(i, acc);
    }
    return out;
}

/// Real 4x4 matrix of port-to-port probabilities, optionally carrying
/// per-entry measurement uncertainties. Entry (i, j) is the probability of
/// exiting port i+1 for input at port j+1.
class ProbabilityMatrix {
public:
    using Entries = std::array<double, 16>;

    ProbabilityMatrix() : entries_{} {}

    static ProbabilityMatrix from_entries(const Entries& entries,
                                          std::optional<Entries> uncertainties = std::nullopt) {
        ProbabilityMatrix p;
        for (int k = 0; k < 16; ++k) {
            double v = entries[static_cast<std::size_t>(k)];
            if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
                throw invalid_data("probability entry " + std::to_string(v) +
                                   " outside [0, 1]");
            p.entries_[static_cast<std::size_t>(k)] = std::min(1.0, std::max(0.0, v));
        }
        if (uncertainties) {
            Entries u{};
            for (int k = 0; k < 16; ++k) {
                double v = (*uncertainties)[static_cast<std::size_t>(k)];
                if (!std::isfinite(v) || v < -1e-12)
                    throw invalid_data("uncertainty entries must be non-negative");
                u[static_cast<std::size_t>(k)] = std::max(0.0, v);
            }
            p.unc_ = u;
        }
        return p;
    }

    double operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)];
    }

    bool has_uncertainties() const { return unc_.has_value(); }

    double uncertainty(int i, int j) const {
        if (!unc_)
            throw invalid_data("no uncertainties recorded for this matrix");
        return (*unc_)[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)];
    }

    const Entries& entries() const { return entries_; }
    const std::optional<Entries>& uncertainties() const { return unc_; }

    std::array<double, 4> column_sums() const {
        std::array<double, 4> sums{};
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) sums[static_cast<std::size_t>(j)] += (*this)(i, j);
        return sums;
    }

private:
    Entries entries_;
    std::optional<Entries> unc_;
};

/// Entrywise |S(i,j)|^2 of a four-port matrix; no renormalization.
inline ProbabilityMatrix probability_matrix(const ScatteringMatrix& s) {
    if (s.dim() != 4)
        throw dimension_error("probability matrix is defined for four-port devices");
    ProbabilityMatrix::Entries e{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            e[static_cast<std::size_t>(i) * 4u + static_cast<std::size_t>(j)] = std::norm(s(i, j));
    return ProbabilityMatrix::from_entries(e);
}

} // namespace gmi

#endif // GMI_CORE_HPP
