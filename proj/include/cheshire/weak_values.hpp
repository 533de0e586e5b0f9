#ifndef CHESHIRE_WEAK_VALUES_HPP
#define CHESHIRE_WEAK_VALUES_HPP

#include "cheshire/tensor.hpp"

// The Cheshire-cat pre/post-selected scenario and exact weak values.
//
// Conventions, fixed project-wide: the system space is [path:2, sysPol:2]
// with basis order (uH, uV, lH, lV); sigma_z = |H><H| - |V><V| and
// |+->  = (|H> +- |V>)/sqrt(2). Under these the scenario's weak-value table
// for (Pi_u, Pi_u sigma_z, Pi_l, Pi_l sigma_z) is (1, 0, 0, 1).

namespace cheshire::qcc {

// Below this overlap magnitude a post-selection is treated as orthogonal:
// weak values would be amplified without bound, so it is a hard error.
inline constexpr double kOrthogonalityEps = 1e-10;

SpaceLabel path_label();
SpaceLabel sys_pol_label();
Space system_space();

// A normalized pre-selected / post-selected pair over [path, sysPol].
struct PrePost {
    Ket pre;
    Ket post;
};

// Validates unit norm (1e-12) and matching spaces.
PrePost make_prepost(Ket pre, Ket post);

struct QccObservables {
    Operator pi_u;
    Operator pi_l;
    Operator pi_u_sz;
    Operator pi_l_sz;
    Operator sigma_z;
    Operator pi_l_piH;
    Operator pi_l_piV;
};

struct Scenario {
    PrePost states;
    QccObservables observables;
};

// The interferometer scenario: pre = (|u>|+> + |l>|->)/sqrt(2),
// post = (|u> + |l>)|+>/sqrt(2), plus the observables on [path, sysPol].
Scenario qcc_scenario();

// <post|A|pre> / <post|pre>. Throws OrthogonalPostSelection when
// |<post|pre>| <= eps.
Complex weak_value(const Operator& a, const PrePost& pp, double eps = kOrthogonalityEps);

struct SumRuleResiduals {
    double sigma_z_residual; // | <Pi_u sz>_w - (<sz>_w - <Pi_l sz>_w) |
    double path_residual;    // | <Pi_u>_w + <Pi_l>_w - 1 |
};

SumRuleResiduals sum_rule_check(const PrePost& pp);

// |<post|pre>|^2
double postselection_probability(const PrePost& pp);

} // namespace cheshire::qcc

#endif
