#include "h2market/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace h2market::numeric {

double brent_root(const std::function<double(double)>& f, double a, double b, double tol,
                  int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("brent_root: endpoints do not bracket");
    if (std::fabs(fa) < std::fabs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa, s = b, fs = fb, d = 0.0;
    bool mflag = true;
    for (int it = 0; it < max_iter; ++it) {
        if (fa != fc && fb != fc) {
            // inverse quadratic interpolation
            s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            s = b - fb * (b - a) / (fb - fa);  // secant
        }
        double lo = (3.0 * a + b) / 4.0, hi = b;
        if (lo > hi) std::swap(lo, hi);
        bool bad = s < lo || s > hi;
        if (bad || (mflag && std::fabs(s - b) >= std::fabs(b - c) / 2.0) ||
            (!mflag && std::fabs(s - b) >= std::fabs(c - d) / 2.0)) {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }
        fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (fa * fs < 0.0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::fabs(fa) < std::fabs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
        double scale = std::fmax(1.0, std::fabs(b));
        if (fb == 0.0 || std::fabs(b - a) < tol + 4.0 * 2.220446049250313e-16 * scale) return b;
    }
    return b;
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol,
                  int max_iter) {
    constexpr double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol * std::fmax(1.0, std::fabs(a) + std::fabs(b));
         ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    // parabolic polish on the final triple
    double xm = 0.5 * (a + b), fm = f(xm);
    double h = 0.25 * (b - a);
    if (h > 0.0) {
        double fl = f(xm - h), fr = f(xm + h);
        double denom = fl - 2.0 * fm + fr;
        if (denom < 0.0) {
            double step = 0.5 * h * (fl - fr) / denom;
            if (std::fabs(step) < h) {
                double xq = xm + step;
                double fq = f(xq);
                if (fq > fm) return xq;
            }
        }
    }
    return fm >= std::fmax(f1, f2) ? xm : (f1 > f2 ? x1 : x2);
}

}  // namespace h2market::numeric
