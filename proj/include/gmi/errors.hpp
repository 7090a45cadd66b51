#ifndef GMI_ERRORS_HPP
#define GMI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gmi {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A device or operation parameter violates its documented range.
class invalid_parameter : public error {
public:
    using error::error;
};

// Measured data or a data file failed validation.
class invalid_data : public error {
public:
    using error::error;
};

// Matrix/state port counts do not match.
class dimension_error : public error {
public:
    using error::error;
};

// An iterative computation ran out of budget before reaching its tolerance.
class convergence_error : public error {
public:
    using error::error;
};

// The steady-state solve hit a resonant (singular) phase configuration.
class resonance_error : public error {
public:
    resonance_error(double phi1, double phi2, const std::string& what)
        : error(what), phi1_(phi1), phi2_(phi2) {}

    double phi1() const { return phi1_; }
    double phi2() const { return phi2_; }

private:
    double phi1_;
    double phi2_;
};

} // namespace gmi

#endif // GMI_ERRORS_HPP
