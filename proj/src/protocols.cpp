#include "cheshire/protocols.hpp"

#include <cmath>
#include <utility>

#include "cheshire/fock_optics.hpp"

namespace cheshire::protocols {

namespace {

constexpr double kPi = 3.14159265358979323846;

SpaceLabel pointer_pol_label() { return {"ptrPol", 2}; }

const qcc::Scenario& scenario() {
    static const qcc::Scenario s = qcc::qcc_scenario();
    return s;
}

Operator setting_observable(KimSetting setting) {
    return setting == KimSetting::H ? scenario().observables.pi_l_piH
                                    : scenario().observables.pi_l_piV;
}

std::string setting_name(KimSetting setting) { return setting == KimSetting::H ? "H" : "V"; }

std::string gate_name(GateKind gate) {
    return gate == GateKind::IdealCoupling ? "ideal" : "ppbs";
}

double gate_success_amplitude(GateKind gate) {
    if (gate == GateKind::IdealCoupling) return 1.0;
    // Certified from the two-photon pipeline at the working point; the
    // conditional map is verified proportional to controlled-Z first.
    static const double s = fock::certified_cz_scalar();
    return s;
}

void require_positive_strength(double g) {
    if (!(g > 0.0)) {
        throw PreconditionError("coupling strength must be positive");
    }
}

pointer::CoupledRun run_single_pointer(const qcc::PrePost& pp, const Operator& obs, double g,
                                       GateKind gate) {
    pointer::CoupledRun run =
        pointer::couple_and_postselect(pp, {{pointer_pol_label(), obs, g}});
    if (gate == GateKind::PpbsGate) {
        const double s = gate_success_amplitude(gate);
        run.pointer_state = run.pointer_state.scaled(Complex(s, 0));
        run.ps_prob = run.pointer_state.norm_squared();
    }
    return run;
}

std::vector<pointer::PointerSpec> genuine_pointers(double g) {
    const qcc::QccObservables& obs = scenario().observables;
    return {
        {{"ptr1", 2}, obs.pi_u, g},
        {{"ptr2", 2}, obs.pi_u_sz, g},
        {{"ptr3", 2}, obs.pi_l, g},
        {{"ptr4", 2}, obs.pi_l_sz, g},
    };
}

// sigma_z as seen at the interferometer input, transported through the
// preparation optics |H> -> |u,+>, |V> -> |l,->: the rank-two operator
// |u,+><l,-| + |l,-><u,+| on [path, sysPol].
Operator before_entrance_observable() {
    const Space sys = qcc::system_space();
    std::vector<Complex> m(16, Complex(0, 0));
    const double up[4] = {0.5, 0.5, 0.0, 0.0};  // |u,+> /sqrt(2) paired below
    const double lm[4] = {0.0, 0.0, 0.5, -0.5}; // |l,-> /sqrt(2) paired below
    // outer(|u,+>, <l,-|) + outer(|l,->, <u,+|); the 1/2 factors above are
    // the products of the two 1/sqrt(2) normalizations, written exactly.
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            m[r * 4 + c] = Complex(2.0 * (up[r] * lm[c] + lm[r] * up[c]), 0);
        }
    }
    return make_operator(sys, std::move(m));
}

ShotCount combine_shots(const ShotCount& a, const ShotCount& b, const char* what) {
    if (a.has_value() != b.has_value()) {
        throw PreconditionError(std::string(what) + ": cannot combine exact and sampled records");
    }
    if (!a) return std::nullopt;
    return *a + *b;
}

const MeasurementRecord* find_record(const std::vector<MeasurementRecord>& records,
                                     ObservableId id) {
    for (const MeasurementRecord& r : records) {
        if (r.observable_id == id) return &r;
    }
    return nullptr;
}

} // namespace

std::string to_string(ObservableId id) {
    switch (id) {
        case ObservableId::PiU: return "Pi_u";
        case ObservableId::PiL: return "Pi_l";
        case ObservableId::PiUSz: return "Pi_u_sz";
        case ObservableId::PiLSz: return "Pi_l_sz";
        case ObservableId::Sz: return "sigma_z";
        case ObservableId::PiLPiH: return "Pi_l_Pi_H";
        case ObservableId::PiLPiV: return "Pi_l_Pi_V";
    }
    throw PreconditionError("unknown observable id");
}

ObservableId observable_id_from_string(const std::string& name) {
    for (ObservableId id : {ObservableId::PiU, ObservableId::PiL, ObservableId::PiUSz,
                            ObservableId::PiLSz, ObservableId::Sz, ObservableId::PiLPiH,
                            ObservableId::PiLPiV}) {
        if (to_string(id) == name) return id;
    }
    throw PreconditionError("unknown observable id '" + name + "'");
}

std::string provenance_kind(const Provenance& p) {
    if (std::holds_alternative<Measured>(p)) return "Measured";
    if (std::holds_alternative<Reconstructed>(p)) return "Reconstructed";
    return "Inferred";
}

void validate_protocol(const Protocol& p) {
    require_positive_strength(p.g);
    if (p.shots && *p.shots < 1) {
        throw PreconditionError("sampled protocols need at least one shot");
    }
}

std::vector<MeasurementRecord> genuine_qcc_run(double g) {
    return genuine_qcc_run(g, scenario().states);
}

std::vector<MeasurementRecord> genuine_qcc_run(double g, const qcc::PrePost& pp) {
    require_positive_strength(g);
    const pointer::CoupledRun run = pointer::couple_and_postselect(pp, genuine_pointers(g));
    const ObservableId ids[4] = {ObservableId::PiU, ObservableId::PiUSz, ObservableId::PiL,
                                 ObservableId::PiLSz};
    const char* labels[4] = {"ptr1", "ptr2", "ptr3", "ptr4"};
    std::vector<MeasurementRecord> out;
    out.reserve(4);
    for (int k = 0; k < 4; ++k) {
        const pointer::PointerReadout r = pointer::pointer_readout(run, {labels[k], 2});
        out.push_back({ids[k], pointer::first_order_estimate(r, g), g, std::nullopt,
                       "genuine-joint", Measured{}});
    }
    return out;
}

MeasurementRecord kim_run(KimSetting setting, double g, GateKind gate) {
    return kim_run(setting, g, gate, scenario().states);
}

MeasurementRecord kim_run(KimSetting setting, double g, GateKind gate, const qcc::PrePost& pp) {
    require_positive_strength(g);
    const pointer::CoupledRun run = run_single_pointer(pp, setting_observable(setting), g, gate);
    const pointer::PointerReadout r = pointer::pointer_readout(run, pointer_pol_label());
    const ObservableId id =
        setting == KimSetting::H ? ObservableId::PiLPiH : ObservableId::PiLPiV;
    return {id, pointer::first_order_estimate(r, g), g, std::nullopt,
            "kim-" + setting_name(setting) + "-" + gate_name(gate), Measured{}};
}

std::vector<MeasurementRecord> kim_reconstruct(const MeasurementRecord& rec_h,
                                               const MeasurementRecord& rec_v) {
    if (rec_h.observable_id != ObservableId::PiLPiH ||
        rec_v.observable_id != ObservableId::PiLPiV) {
        throw PreconditionError(
            "reconstruction needs a Pi_l_Pi_H record and a Pi_l_Pi_V record, in that order");
    }
    if (rec_h.g != rec_v.g) {
        throw PreconditionError("reconstruction inputs were taken at different strengths");
    }
    if (rec_h.setup_id == rec_v.setup_id) {
        throw PreconditionError("reconstruction needs records from two distinct setups");
    }
    const auto gate_suffix = [](const std::string& setup) {
        const std::size_t pos = setup.rfind('-');
        return pos == std::string::npos ? setup : setup.substr(pos + 1);
    };
    if (gate_suffix(rec_h.setup_id) != gate_suffix(rec_v.setup_id)) {
        throw PreconditionError("reconstruction inputs come from different gate realizations");
    }
    const ShotCount shots = combine_shots(rec_h.shots, rec_v.shots, "reconstruction");
    const Reconstructed prov{{rec_h.setup_id, rec_v.setup_id}};
    return {
        {ObservableId::PiL, rec_h.value + rec_v.value, rec_h.g, shots, "kim-reconstruction", prov},
        {ObservableId::PiLSz, rec_h.value - rec_v.value, rec_h.g, shots, "kim-reconstruction",
         prov},
    };
}

MeasurementRecord infer_complement(const MeasurementRecord& pi_l_rec) {
    if (pi_l_rec.observable_id != ObservableId::PiL) {
        throw PreconditionError("complement inference needs a Pi_l record");
    }
    return {ObservableId::PiU, Complex(1, 0) - pi_l_rec.value, pi_l_rec.g, pi_l_rec.shots,
            "arm-u-inference", Inferred{"complement_rule"}};
}

MeasurementRecord infer_sum_rule(const MeasurementRecord& sz_rec,
                                 const MeasurementRecord& pi_l_sz_rec) {
    if (sz_rec.observable_id != ObservableId::Sz) {
        throw PreconditionError("sum-rule inference needs a sigma_z record");
    }
    if (pi_l_sz_rec.observable_id != ObservableId::PiLSz) {
        throw PreconditionError("sum-rule inference needs a Pi_l_sz record");
    }
    const ShotCount shots =
        (!sz_rec.shots && !pi_l_sz_rec.shots)
            ? ShotCount{}
            : ShotCount{(sz_rec.shots ? *sz_rec.shots : 0) +
                        (pi_l_sz_rec.shots ? *pi_l_sz_rec.shots : 0)};
    return {ObservableId::PiUSz, sz_rec.value - pi_l_sz_rec.value, pi_l_sz_rec.g, shots,
            "arm-u-inference", Inferred{"sum_rule"}};
}

std::vector<MeasurementRecord> kim_infer_arm_u(const std::vector<MeasurementRecord>& recons,
                                               const std::optional<MeasurementRecord>& sz_record) {
    const MeasurementRecord* pi_l = find_record(recons, ObservableId::PiL);
    const MeasurementRecord* pi_l_sz = find_record(recons, ObservableId::PiLSz);
    if (pi_l == nullptr || pi_l_sz == nullptr) {
        throw PreconditionError("arm-u inference needs reconstructed Pi_l and Pi_l_sz records");
    }
    std::vector<MeasurementRecord> out;
    out.push_back(infer_complement(*pi_l));
    if (!sz_record) {
        throw MissingSigmaZMeasurement("additional sigma_z measurement required");
    }
    out.push_back(infer_sum_rule(*sz_record, *pi_l_sz));
    return out;
}

MeasurementRecord sigma_z_run(double g, SigmaZLocation location) {
    return sigma_z_run(g, location, scenario().states);
}

MeasurementRecord sigma_z_run(double g, SigmaZLocation location, const qcc::PrePost& pp) {
    require_positive_strength(g);
    Operator obs = scenario().observables.sigma_z;
    std::string setup = "sigma-z-after";
    if (location == SigmaZLocation::before_entrance) {
        if (pp.pre.space() != qcc::system_space() ||
            max_abs_diff(pp.pre, scenario().states.pre) > 1e-12) {
            throw PreconditionError(
                "before-entrance coupling is defined by the interferometer preparation; "
                "the pre-selected state must be the interferometer input");
        }
        obs = before_entrance_observable();
        setup = "sigma-z-before";
    }
    const pointer::CoupledRun run =
        pointer::couple_and_postselect(pp, {{pointer_pol_label(), obs, g}});
    const pointer::PointerReadout r = pointer::pointer_readout(run, pointer_pol_label());
    return {ObservableId::Sz, pointer::first_order_estimate(r, g), g, std::nullopt, setup,
            Measured{}};
}

DisturbanceResult strong_disturbance_demo(const Operator& strong_obs, const Operator& weak_obs,
                                          double g) {
    return strong_disturbance_demo(strong_obs, weak_obs, g, scenario().states);
}

DisturbanceResult strong_disturbance_demo(const Operator& strong_obs, const Operator& weak_obs,
                                          double g, const qcc::PrePost& pp) {
    if (!(g > 0.0 && g <= 0.01)) {
        throw PreconditionError("disturbance demo needs a weak strength (0 < g <= 0.01)");
    }
    if (max_abs_diff(strong_obs * strong_obs, strong_obs) > 1e-12) {
        throw PreconditionError("the strongly coupled observable must be a projector");
    }
    const SpaceLabel weak_label{"ptrWeak", 2};
    const pointer::CoupledRun alone =
        pointer::couple_and_postselect(pp, {{weak_label, weak_obs, g}});
    const Complex undisturbed =
        pointer::first_order_estimate(pointer::pointer_readout(alone, weak_label), g);

    const pointer::CoupledRun tagged = pointer::couple_and_postselect(
        pp, {{{"ptrStrong", 2}, strong_obs, kPi}, {weak_label, weak_obs, g}});
    const Complex disturbed =
        pointer::first_order_estimate(pointer::pointer_readout(tagged, weak_label), g);
    return {undisturbed, disturbed};
}

EnsembleEfficiency ensemble_efficiency(const Protocol& p) {
    validate_protocol(p);
    const double amp = gate_success_amplitude(p.gate);
    const double gate_success = amp * amp;
    double ps = 0.0;
    if (p.kind == ProtocolKind::GenuineTwoArm) {
        ps = pointer::couple_and_postselect(scenario().states, genuine_pointers(p.g)).ps_prob;
    } else {
        ps = pointer::couple_and_postselect(
                 scenario().states,
                 {{pointer_pol_label(), setting_observable(KimSetting::H), p.g}})
                 .ps_prob;
    }
    return {gate_success, ps, gate_success * ps};
}

pointer::PointerReadout protocol_readout(ProtocolKind kind, GateKind gate,
                                         const SweepTarget& target, double g) {
    require_positive_strength(g);
    if (kind == ProtocolKind::KimSingleArm) {
        const pointer::CoupledRun run =
            run_single_pointer(scenario().states, setting_observable(target.setting), g, gate);
        return pointer::pointer_readout(run, pointer_pol_label());
    }
    const char* label = nullptr;
    switch (target.genuine_observable) {
        case ObservableId::PiU: label = "ptr1"; break;
        case ObservableId::PiUSz: label = "ptr2"; break;
        case ObservableId::PiL: label = "ptr3"; break;
        case ObservableId::PiLSz: label = "ptr4"; break;
        default:
            throw PreconditionError(
                "the joint protocol couples pointers only to Pi_u, Pi_u_sz, Pi_l, Pi_l_sz");
    }
    pointer::CoupledRun run = pointer::couple_and_postselect(scenario().states, genuine_pointers(g));
    if (gate == GateKind::PpbsGate) {
        const double s = gate_success_amplitude(gate);
        run.pointer_state = run.pointer_state.scaled(Complex(s, 0));
        run.ps_prob = run.pointer_state.norm_squared();
    }
    return pointer::pointer_readout(run, {label, 2});
}

} // namespace cheshire::protocols
