#pragma once

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

namespace driftwatch::detail {

// Two-sided p-value of a t statistic with the given degrees of freedom.
inline double student_two_sided_p(double t, double dof) {
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(dist, -std::fabs(t));
}

} // namespace driftwatch::detail
