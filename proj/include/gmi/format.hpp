#ifndef GMI_FORMAT_HPP
#define GMI_FORMAT_HPP

#include <complex>
#include <cstdio>
#include <string>

namespace gmi {

// Fixed 12-significant-digit scientific notation. Every writer in the
// library funnels through these two helpers so that identical inputs give
// byte-identical output.
inline std::string format_sci(double v) {
    if (v == 0.0) v = 0.0; // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

inline std::string format_amplitude(const std::complex<double>& a) {
    double re = a.real();
    double im = a.imag();
    if (re == 0.0) re = 0.0;
    if (im == 0.0) im = 0.0;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.11e%+.11ei", re, im);
    return buf;
}

} // namespace gmi

#endif // GMI_FORMAT_HPP
