#include "cheshire/weak_values.hpp"

#include <cmath>
#include <utility>

namespace cheshire::qcc {

SpaceLabel path_label() { return {"path", 2}; }
SpaceLabel sys_pol_label() { return {"sysPol", 2}; }
Space system_space() { return {path_label(), sys_pol_label()}; }

PrePost make_prepost(Ket pre, Ket post) {
    if (pre.space() != post.space()) {
        throw SpaceMismatchError("pre and post states live on different spaces");
    }
    const double tol = 1e-12;
    if (std::abs(pre.norm() - 1.0) > tol) {
        throw PreconditionError("pre-selected state is not normalized");
    }
    if (std::abs(post.norm() - 1.0) > tol) {
        throw PreconditionError("post-selected state is not normalized");
    }
    return PrePost{std::move(pre), std::move(post)};
}

Scenario qcc_scenario() {
    const Space sys = system_space();
    // (|u>|+> + |l>|->)/sqrt(2) and (|u> + |l>)|+>/sqrt(2) expand to
    // amplitude 1/2 on each basis state, signed as below. Writing the
    // halves literally keeps the whole weak-value table exact in floating
    // point.
    Ket pre = make_ket(sys, {{0.5, 0}, {0.5, 0}, {0.5, 0}, {-0.5, 0}});
    Ket post = make_ket(sys, {{0.5, 0}, {0.5, 0}, {0.5, 0}, {0.5, 0}});

    const SpaceLabel path = path_label();
    const SpaceLabel pol = sys_pol_label();
    const Operator pu = tensor(projector(path, 0), Operator::identity({pol}));
    const Operator pl = tensor(projector(path, 1), Operator::identity({pol}));
    const Operator sz = tensor(Operator::identity({path}), pauli_z(pol));
    const Operator plh = tensor(projector(path, 1), projector(pol, 0));
    const Operator plv = tensor(projector(path, 1), projector(pol, 1));

    QccObservables obs{pu, pl, pu * sz, pl * sz, sz, plh, plv};
    return Scenario{make_prepost(std::move(pre), std::move(post)), std::move(obs)};
}

Complex weak_value(const Operator& a, const PrePost& pp, double eps) {
    const Complex denom = inner(pp.post, pp.pre);
    if (std::abs(denom) <= eps) {
        throw OrthogonalPostSelection("post-selected state is orthogonal to the pre-selected state");
    }
    return inner(pp.post, apply(a, pp.pre)) / denom;
}

SumRuleResiduals sum_rule_check(const PrePost& pp) {
    // Reuse the scenario's operator set; any PrePost over [path, sysPol]
    // shares it.
    const QccObservables obs = qcc_scenario().observables;
    const Complex wu = weak_value(obs.pi_u, pp);
    const Complex wl = weak_value(obs.pi_l, pp);
    const Complex wusz = weak_value(obs.pi_u_sz, pp);
    const Complex wlsz = weak_value(obs.pi_l_sz, pp);
    const Complex wsz = weak_value(obs.sigma_z, pp);
    return SumRuleResiduals{
        std::abs(wusz - (wsz - wlsz)),
        std::abs(wu + wl - Complex(1, 0)),
    };
}

double postselection_probability(const PrePost& pp) {
    return std::norm(inner(pp.post, pp.pre));
}

} // namespace cheshire::qcc
