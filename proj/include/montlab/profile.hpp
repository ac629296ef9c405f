#ifndef MONTLAB_PROFILE_HPP
#define MONTLAB_PROFILE_HPP

// Profile functions f: [-1,1] -> R acting through inner products f(x.z),
// given as a cap indicator, a numeric callable, or a finite Gegenbauer series.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <utility>

#include "montlab/gegenbauer.hpp"

namespace montlab {

class ProfileFunction {
public:
    enum class Kind { CapIndicator, Numeric, GegenbauerSeries };

    static ProfileFunction capIndicator(double tau) {
        requireDomain(tau >= -1.0 && tau <= 1.0, "ProfileFunction: cap tau must lie in [-1,1]");
        ProfileFunction f;
        f.kind_ = Kind::CapIndicator;
        f.tau_ = tau;
        return f;
    }

    static ProfileFunction numeric(std::function<double(double)> fn) {
        ProfileFunction f;
        f.kind_ = Kind::Numeric;
        f.fn_ = std::move(fn);
        return f;
    }

    // f(t) = sum_n coeffs[n] C_n^lambda(t); lambda is fixed at construction.
    static ProfileFunction gegenbauerSeries(Eigen::VectorXd coeffs, double lambda) {
        requireArg(coeffs.size() >= 1, "ProfileFunction: empty Gegenbauer series");
        requireArg(lambda > 0.0, "ProfileFunction: series lambda must be positive");
        ProfileFunction f;
        f.kind_ = Kind::GegenbauerSeries;
        f.coeffs_ = std::move(coeffs);
        f.lambda_ = lambda;
        return f;
    }

    Kind kind() const { return kind_; }
    double tau() const { return tau_; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }
    int seriesDegree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double evaluate(double t) const {
        switch (kind_) {
            case Kind::CapIndicator:
                return t >= tau_ ? 1.0 : 0.0;
            case Kind::Numeric:
                return fn_(t);
            case Kind::GegenbauerSeries: {
                Eigen::VectorXd sweep(coeffs_.size());
                gegenbauerSweep(lambda_, seriesDegree(), t, sweep);
                return coeffs_.dot(sweep);
            }
        }
        return 0.0;
    }

    void precomputeHat(const GegenbauerContext& ctx, int L);

    // Cached coefficients when available (matching lambda, enough degrees).
    const std::optional<HatCoefficients>& cachedHat() const { return hat_; }

private:
    Kind kind_ = Kind::Numeric;
    double tau_ = 0.0;
    double lambda_ = 0.0;
    std::function<double(double)> fn_;
    Eigen::VectorXd coeffs_;
    std::optional<HatCoefficients> hat_;
};

// fhat(n,lambda) for n = 0..L. Cap indicators integrate over [tau,1] with a
// dedicated mapped rule; everything else goes through the context's global
// Gauss-Gegenbauer rule.
inline HatCoefficients hatTransform(const GegenbauerContext& ctx, const ProfileFunction& f,
                                    int L) {
    if (f.cachedHat() && f.cachedHat()->lambda == ctx.lambda() &&
        f.cachedHat()->values.size() >= L + 1) {
        HatCoefficients hat;
        hat.lambda = ctx.lambda();
        hat.values = f.cachedHat()->values.head(L + 1);
        return hat;
    }
    if (f.kind() == ProfileFunction::Kind::CapIndicator) {
        HatCoefficients hat;
        hat.lambda = ctx.lambda();
        hat.values = capHatCoefficients(ctx, f.tau(), L);
        return hat;
    }
    return hatTransformCallable(ctx, [&f](double t) { return f.evaluate(t); }, L);
}

inline void ProfileFunction::precomputeHat(const GegenbauerContext& ctx, int L) {
    hat_.reset();
    hat_ = hatTransform(ctx, *this, L);
}

}  // namespace montlab

#endif
