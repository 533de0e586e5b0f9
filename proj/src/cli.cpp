#include "cheshire/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "cheshire/errors.hpp"
#include "cheshire/estimation.hpp"
#include "cheshire/fock_optics.hpp"
#include "cheshire/io.hpp"
#include "cheshire/protocols.hpp"
#include "cheshire/weak_values.hpp"

namespace cheshire::cli {
namespace {

namespace est = estimation;
namespace proto = protocols;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(const std::string& s) {
    const char* ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) {
        return std::string();
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double_strict(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw PreconditionError("cannot parse number '" + s + "'");
}

std::uint64_t parse_uint_strict(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw PreconditionError("cannot parse count '" + s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw PreconditionError("count out of range '" + s + "'");
    }
}

// Writes to the --out file when given, the stream otherwise.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw RuntimeFailure("cannot open output file: " + path);
    }
    f << text;
    f.flush();
    if (!f) {
        throw RuntimeFailure("cannot write output file: " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw PreconditionError("cannot read input file: " + path);
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// Flat key=value config lines ('#' starts a comment). Each key is turned
// into a --key=value token. The caller inserts these right after the
// subcommand name, so explicit flags parse later and win.
std::vector<std::string> config_tokens(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::string> tokens;
    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw PreconditionError("config " + path + " line " + std::to_string(lineno) +
                                    " is not key=value: '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw PreconditionError("config " + path + " line " + std::to_string(lineno) +
                                    " has an empty key");
        }
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = {
        "weak-values", "genuine",     "kim",   "sigma-z", "kim-reconstruct",
        "ppbs",        "sensitivity", "sweep", "extrapolate", "efficiency"};
    return names;
}

// Replaces --config FILE (after the subcommand name) with the file's
// key=value lines as --key=value tokens, placed before every explicit flag.
std::vector<std::string> apply_config_files(std::vector<std::string> args) {
    const auto& names = subcommand_names();
    std::size_t sub_pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (std::find(names.begin(), names.end(), args[i]) != names.end()) {
            sub_pos = i;
            break;
        }
    }
    if (sub_pos == args.size()) {
        return args;
    }
    std::vector<std::string> from_config;
    std::vector<std::string> rest;
    for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) {
                throw PreconditionError("--config needs a file path");
            }
            const auto tokens = config_tokens(args[++i]);
            from_config.insert(from_config.end(), tokens.begin(), tokens.end());
        } else if (a.rfind("--config=", 0) == 0) {
            const auto tokens = config_tokens(a.substr(9));
            from_config.insert(from_config.end(), tokens.begin(), tokens.end());
        } else {
            rest.push_back(a);
        }
    }
    std::vector<std::string> cleaned(args.begin(), args.begin() + sub_pos + 1);
    cleaned.insert(cleaned.end(), from_config.begin(), from_config.end());
    cleaned.insert(cleaned.end(), rest.begin(), rest.end());
    return cleaned;
}

void refuse_inferred(const std::vector<proto::MeasurementRecord>& records, bool require_measured) {
    if (!require_measured) {
        return;
    }
    for (const auto& r : records) {
        if (std::holds_alternative<proto::Inferred>(r.provenance)) {
            throw RuntimeFailure("--require-measured: record " + proto::to_string(r.observable_id) +
                                 " is Inferred, not measured");
        }
    }
}

proto::GateKind to_gate(const std::string& s) {
    return s == "ppbs" ? proto::GateKind::PpbsGate : proto::GateKind::IdealCoupling;
}

proto::KimSetting to_setting(const std::string& s) {
    return s == "V" ? proto::KimSetting::V : proto::KimSetting::H;
}

proto::ProtocolKind to_protocol(const std::string& s) {
    return s == "genuine" ? proto::ProtocolKind::GenuineTwoArm : proto::ProtocolKind::KimSingleArm;
}

proto::SigmaZLocation to_location(const std::string& s) {
    return s == "before" ? proto::SigmaZLocation::before_entrance
                         : proto::SigmaZLocation::after_exit;
}

const proto::MeasurementRecord* find_record(const std::vector<proto::MeasurementRecord>& rs,
                                            proto::ObservableId id) {
    for (const auto& r : rs) {
        if (r.observable_id == id) {
            return &r;
        }
    }
    return nullptr;
}

std::string weak_values_json() {
    const qcc::Scenario sc = qcc::qcc_scenario();
    const std::pair<const char*, const Operator*> table[] = {
        {"Pi_u", &sc.observables.pi_u},           {"Pi_u_sz", &sc.observables.pi_u_sz},
        {"Pi_l", &sc.observables.pi_l},           {"Pi_l_sz", &sc.observables.pi_l_sz},
        {"sigma_z", &sc.observables.sigma_z},     {"Pi_l_Pi_H", &sc.observables.pi_l_piH},
        {"Pi_l_Pi_V", &sc.observables.pi_l_piV},
    };
    std::string s = "{\"schema\":1,\n\"weak_values\":{";
    bool first = true;
    for (const auto& [name, op] : table) {
        if (!first) {
            s += ",";
        }
        first = false;
        s += "\n\"";
        s += name;
        s += "\":" + io::complex_to_json(qcc::weak_value(*op, sc.states));
    }
    s += "\n},\n";
    const qcc::SumRuleResiduals res = qcc::sum_rule_check(sc.states);
    s += "\"sum_rule_residuals\":{\"sigma_z_rule\":" + io::format_double(res.sigma_z_residual) +
         ",\"path_rule\":" + io::format_double(res.path_residual) + "},\n";
    s += "\"postselection_probability\":" +
         io::format_double(qcc::postselection_probability(sc.states)) + "}\n";
    return s;
}

std::string ppbs_json(double t_h, double t_v) {
    const fock::PpbsSpec spec = fock::make_ppbs_spec(t_h, t_v);
    const std::vector<fock::Attenuation> adj = fock::standard_adjustments();
    const Operator m = fock::conditional_gate_matrix(spec, adj);
    std::string s = "{\"schema\":1,\n\"conditional_gate_matrix\":[";
    for (std::size_t r = 0; r < 4; ++r) {
        s += (r == 0) ? "\n[" : ",\n[";
        for (std::size_t c = 0; c < 4; ++c) {
            if (c > 0) {
                s += ",";
            }
            s += io::complex_to_json(m.at(r, c));
        }
        s += "]";
    }
    s += "\n],\n";
    try {
        const double z = fock::certified_cz_scalar(spec, adj);
        s += "\"cz_scalar\":" + io::format_double(z) + ",\n";
        s += "\"success_probability\":" + io::format_double(z * z) + ",\n";
        s += "\"discarded_fraction\":" + io::format_double(1.0 - z * z) + "}\n";
    } catch (const RuntimeFailure&) {
        // The channel is only proportional to a controlled-Z at the working
        // point; elsewhere the matrix is still worth printing.
        s += "\"cz_scalar\":null,\n\"success_probability\":null,\n\"discarded_fraction\":null}\n";
    }
    return s;
}

std::string efficiency_json(const proto::Protocol& p) {
    const proto::EnsembleEfficiency e = proto::ensemble_efficiency(p);
    std::string s = "{\"schema\":1,\n";
    s += "\"gate_success\":" + io::format_double(e.gate_success) + ",\n";
    s += "\"ps_prob\":" + io::format_double(e.ps_prob) + ",\n";
    s += "\"retained\":" + io::format_double(e.retained) + ",\n";
    s += "\"gate_discarded_fraction\":" + io::format_double(1.0 - e.gate_success) + "}\n";
    return s;
}

std::string fit_json(const est::FitResult& f) {
    std::string s = "{\"schema\":1,\n\"fit\":{";
    s += "\"degree\":" + std::to_string(f.degree);
    s += ",\"zero_intercept\":";
    s += f.zero_intercept ? "true" : "false";
    s += ",\n\"coefficients\":[";
    for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
        if (i > 0) {
            s += ",";
        }
        s += io::format_double(f.coefficients[i]);
    }
    s += "],\n\"covariance\":[";
    for (std::size_t r = 0; r < f.covariance.size(); ++r) {
        s += (r == 0) ? "[" : ",[";
        for (std::size_t c = 0; c < f.covariance[r].size(); ++c) {
            if (c > 0) {
                s += ",";
            }
            s += io::format_double(f.covariance[r][c]);
        }
        s += "]";
    }
    s += "],\n\"wv_estimate\":" + io::format_double(f.wv_estimate);
    s += ",\"wv_stderr\":" + io::format_double(f.wv_stderr) + "},\n";
    const est::Extrapolation ex = est::extrapolate_weak_value(f);
    s += "\"extrapolation\":{\"estimate\":" + io::format_double(ex.estimate) +
         ",\"stderr\":" + io::format_double(ex.std_error) + "}}\n";
    return s;
}

} // namespace

std::vector<double> parse_g_list(const std::string& text) {
    if (text.empty()) {
        throw PreconditionError("empty strength list");
    }
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(text, ':');
        if (parts.size() != 3) {
            throw PreconditionError("strength range must be lo:hi:n, got '" + text + "'");
        }
        const double lo = parse_double_strict(parts[0]);
        const double hi = parse_double_strict(parts[1]);
        const std::uint64_t n = parse_uint_strict(parts[2]);
        if (n == 0) {
            throw PreconditionError("strength range needs at least one point: '" + text + "'");
        }
        if (n == 1) {
            if (lo != hi) {
                throw PreconditionError("a single-point range needs lo = hi: '" + text + "'");
            }
            out.push_back(lo);
            return out;
        }
        for (std::uint64_t i = 0; i < n; ++i) {
            out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        return out;
    }
    for (const std::string& piece : split(text, ',')) {
        out.push_back(parse_double_strict(piece));
    }
    return out;
}

std::optional<std::uint64_t> parse_shots(const std::string& text) {
    if (text == "exact") {
        return std::nullopt;
    }
    const std::uint64_t n = parse_uint_strict(text);
    if (n == 0) {
        throw PreconditionError("shots must be >= 1, or \"exact\"");
    }
    return n;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact amplitude-level simulator of a two-arm polarization interferometer\n"
                 "with weak pointer couplings, and the estimation pipeline on top of it."};
    app.require_subcommand(1);

    struct Opts {
        std::uint64_t seed = 12345;
        bool require_measured = false;
        std::string out_path;
        double g = 0.1;
        std::string setting = "H";
        std::string gate = "ideal";
        std::string protocol = "kim";
        std::string observable = "Pi_u";
        std::string location = "after";
        std::string g_list_text = "0.05:0.6:8";
        std::vector<std::string> g_lists;
        std::string shots_text = "100000";
        int degree = 2;
        std::vector<int> degrees = {1, 2, 3};
        int trials = 100;
        double g_lo = -1.0; // sentinel: use the sweep's full range
        double g_hi = -1.0;
        bool with_intercept = false;
        std::string rec_h_path;
        std::string rec_v_path;
        std::string sz_path;
        std::string infer_u;
        double t_h = 1.0;
        double t_v = 1.0 / std::sqrt(3.0);
    };
    Opts o;

    // A value given twice keeps the later one, so config-file tokens
    // (inserted first) lose to explicit flags.
    constexpr auto kTakeLast = CLI::MultiOptionPolicy::TakeLast;

    app.add_option("--seed", o.seed, "RNG seed for every sampled quantity")
        ->envname("CHESHIRE_SEED")
        ->multi_option_policy(kTakeLast);
    app.add_flag("--require-measured", o.require_measured,
                 "Fail (exit 1) if any emitted record carries Inferred provenance")
        ->multi_option_policy(kTakeLast);
    app.add_option("--out", o.out_path, "Write the result to this file instead of stdout")
        ->multi_option_policy(kTakeLast);

    const auto add_sub = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        // Consumed before parsing (see apply_config_files); registered so it
        // shows up in help.
        sub->add_option("--config",
                        "Read defaults from a flat key=value file (# comments); explicit "
                        "flags override it");
        return sub;
    };

    // weak-values
    {
        CLI::App* sub = add_sub("weak-values",
                                "Print the exact weak-value table, sum-rule residuals, and "
                                "post-selection probability of the scenario");
        sub->callback([&] { emit(weak_values_json(), o.out_path, out); });
    }

    // genuine
    {
        CLI::App* sub = add_sub("genuine",
                                "Joint four-pointer run: both path projectors and both "
                                "path-polarization products measured in one post-selected pass");
        sub->add_option("--g", o.g, "Coupling strength")
            ->required()
            ->check(CLI::PositiveNumber)
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const std::vector<proto::MeasurementRecord> records = proto::genuine_qcc_run(o.g);
            refuse_inferred(records, o.require_measured);
            emit(io::records_document(records), o.out_path, out);
        });
    }

    // kim
    {
        CLI::App* sub = add_sub("kim", "Single-arm run: one pointer on the lower-arm H or V "
                                       "polarization product");
        sub->add_option("--setting", o.setting, "Which polarization product is coupled")
            ->check(CLI::IsMember({"H", "V"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--g", o.g, "Coupling strength")
            ->required()
            ->check(CLI::PositiveNumber)
            ->multi_option_policy(kTakeLast);
        sub->add_option("--gate", o.gate, "Coupling realization")
            ->check(CLI::IsMember({"ideal", "ppbs"}))
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const proto::MeasurementRecord rec =
                proto::kim_run(to_setting(o.setting), o.g, to_gate(o.gate));
            refuse_inferred({rec}, o.require_measured);
            emit(io::records_document({rec}), o.out_path, out);
        });
    }

    // sigma-z
    {
        CLI::App* sub = add_sub("sigma-z", "Weak polarization (sigma_z) run, before the "
                                           "interferometer entrance or after its exit");
        sub->add_option("--g", o.g, "Coupling strength")
            ->required()
            ->check(CLI::PositiveNumber)
            ->multi_option_policy(kTakeLast);
        sub->add_option("--location", o.location, "Where the pointer couples")
            ->check(CLI::IsMember({"before", "after"}))
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const proto::MeasurementRecord rec = proto::sigma_z_run(o.g, to_location(o.location));
            refuse_inferred({rec}, o.require_measured);
            emit(io::records_document({rec}), o.out_path, out);
        });
    }

    // kim-reconstruct
    {
        CLI::App* sub = add_sub(
            "kim-reconstruct",
            "Combine a Pi_l_Pi_H record and a Pi_l_Pi_V record into lower-arm records; "
            "optionally infer the upper arm (complement rule alone, or with the sum rule)");
        sub->add_option("--rec-h", o.rec_h_path, "Records file holding the Pi_l_Pi_H run")
            ->required()
            ->multi_option_policy(kTakeLast);
        sub->add_option("--rec-v", o.rec_v_path, "Records file holding the Pi_l_Pi_V run")
            ->required()
            ->multi_option_policy(kTakeLast);
        sub->add_option("--sz-record", o.sz_path,
                        "Records file holding a sigma_z run (needed by --infer-u sum-rule)")
            ->multi_option_policy(kTakeLast);
        sub->add_option("--infer-u", o.infer_u,
                        "Also emit upper-arm records: 'complement' emits Pi_u only; 'sum-rule' "
                        "emits Pi_u and Pi_u_sz and requires --sz-record")
            ->check(CLI::IsMember({"complement", "sum-rule"}))
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const auto doc_h = io::records_from_document(read_file(o.rec_h_path));
            const auto doc_v = io::records_from_document(read_file(o.rec_v_path));
            const proto::MeasurementRecord* h = find_record(doc_h, proto::ObservableId::PiLPiH);
            if (h == nullptr) {
                throw PreconditionError("no Pi_l_Pi_H record in " + o.rec_h_path);
            }
            const proto::MeasurementRecord* v = find_record(doc_v, proto::ObservableId::PiLPiV);
            if (v == nullptr) {
                throw PreconditionError("no Pi_l_Pi_V record in " + o.rec_v_path);
            }
            std::vector<proto::MeasurementRecord> records = proto::kim_reconstruct(*h, *v);
            std::optional<proto::MeasurementRecord> sz;
            if (!o.sz_path.empty()) {
                const auto doc_z = io::records_from_document(read_file(o.sz_path));
                const proto::MeasurementRecord* z = find_record(doc_z, proto::ObservableId::Sz);
                if (z == nullptr) {
                    throw PreconditionError("no sigma_z record in " + o.sz_path);
                }
                sz = *z;
            }
            if (o.infer_u == "complement") {
                records.push_back(proto::infer_complement(records[0]));
            } else if (o.infer_u == "sum-rule") {
                const auto arm_u = proto::kim_infer_arm_u(records, sz);
                records.insert(records.end(), arm_u.begin(), arm_u.end());
            }
            refuse_inferred(records, o.require_measured);
            emit(io::records_document(records), o.out_path, out);
        });
    }

    // ppbs
    {
        CLI::App* sub = add_sub("ppbs",
                                "Print the two-photon conditional gate matrix (with the standard "
                                "arm adjustments), its controlled-Z scalar, and the success and "
                                "discarded fractions");
        sub->add_option("--t-h", o.t_h, "H-polarization amplitude transmittance")
            ->check(CLI::Range(0.0, 1.0))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--t-v", o.t_v, "V-polarization amplitude transmittance")
            ->check(CLI::Range(0.0, 1.0))
            ->multi_option_policy(kTakeLast);
        sub->callback([&] { emit(ppbs_json(o.t_h, o.t_v), o.out_path, out); });
    }

    // shared sweep-style options
    const auto add_sweep_options = [&](CLI::App* sub) {
        sub->add_option("--protocol", o.protocol, "Which protocol drives the pointer")
            ->check(CLI::IsMember({"kim", "genuine"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--setting", o.setting, "Kim setting (single-arm protocol)")
            ->check(CLI::IsMember({"H", "V"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--observable", o.observable,
                        "Which joint pointer to read (genuine protocol)")
            ->check(CLI::IsMember({"Pi_u", "Pi_u_sz", "Pi_l", "Pi_l_sz"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--gate", o.gate, "Coupling realization")
            ->check(CLI::IsMember({"ideal", "ppbs"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--shots", o.shots_text,
                        "Shots per strength (integer), or \"exact\" for amplitude-level values")
            ->multi_option_policy(kTakeLast);
    };

    // sweep
    {
        CLI::App* sub = add_sub("sweep", "Pointer read-out over a list of coupling strengths "
                                         "(CSV: g,sx_mean,shots,stderr)");
        add_sweep_options(sub);
        sub->add_option("--g-list", o.g_list_text,
                        "Strengths: comma list \"0.05,0.1\" or range \"lo:hi:n\"")
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const std::vector<double> g_list = parse_g_list(o.g_list_text);
            const proto::ShotCount shots = parse_shots(o.shots_text);
            const proto::Protocol p{to_protocol(o.protocol), to_gate(o.gate),
                                    g_list.empty() ? 0.1 : g_list.front(), shots};
            const proto::SweepTarget target{to_setting(o.setting),
                                            proto::observable_id_from_string(o.observable)};
            const est::SweepData data = est::sweep(p, target, g_list, shots, o.seed);
            emit(io::sweep_to_csv(data), o.out_path, out);
        });
    }

    // extrapolate
    {
        CLI::App* sub = add_sub("extrapolate", "Sweep, then fit sx(g) and report the g->0 slope "
                                               "(the weak-value estimate) with its stderr");
        add_sweep_options(sub);
        sub->add_option("--g-list", o.g_list_text,
                        "Strengths: comma list \"0.05,0.1\" or range \"lo:hi:n\"")
            ->multi_option_policy(kTakeLast);
        sub->add_option("--degree", o.degree, "Polynomial degree of the fit")
            ->check(CLI::Range(1, 12))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--g-lo", o.g_lo, "Lower edge of the fitted range (default: full sweep)")
            ->check(CLI::PositiveNumber)
            ->multi_option_policy(kTakeLast);
        sub->add_option("--g-hi", o.g_hi, "Upper edge of the fitted range (default: full sweep)")
            ->check(CLI::PositiveNumber)
            ->multi_option_policy(kTakeLast);
        sub->add_flag("--with-intercept", o.with_intercept,
                      "Fit an unconstrained intercept instead of pinning sx(0) = 0")
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const std::vector<double> g_list = parse_g_list(o.g_list_text);
            const proto::ShotCount shots = parse_shots(o.shots_text);
            const proto::Protocol p{to_protocol(o.protocol), to_gate(o.gate),
                                    g_list.empty() ? 0.1 : g_list.front(), shots};
            const proto::SweepTarget target{to_setting(o.setting),
                                            proto::observable_id_from_string(o.observable)};
            const est::SweepData data = est::sweep(p, target, g_list, shots, o.seed);
            est::FitConfig cfg;
            cfg.degree = o.degree;
            cfg.g_lo = o.g_lo >= 0.0 ? o.g_lo : g_list.front();
            cfg.g_hi = o.g_hi >= 0.0 ? o.g_hi : g_list.back();
            cfg.zero_intercept = !o.with_intercept;
            emit(fit_json(est::polyfit(data, cfg)), o.out_path, out);
        });
    }

    // sensitivity
    {
        CLI::App* sub = add_sub(
            "sensitivity",
            "Monte Carlo spread of the extrapolated weak value across fit degrees and "
            "strength ranges (CSV: degree,g_lo,g_hi,mean_estimate,spread)");
        add_sweep_options(sub);
        sub->add_option("--g-list", o.g_lists,
                        "Strength list/range; repeat the flag for several ranges");
        sub->add_option("--degrees", o.degrees, "Fit degrees, comma separated")->delimiter(',');
        sub->add_option("--trials", o.trials, "Seeded resamples per configuration (>= 30)")
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            if (o.g_lists.empty()) {
                o.g_lists = {"0.05:0.3:6", "0.05:0.6:8"};
            }
            std::vector<std::vector<double>> g_lists;
            g_lists.reserve(o.g_lists.size());
            for (const std::string& t : o.g_lists) {
                g_lists.push_back(parse_g_list(t));
            }
            const proto::ShotCount shots = parse_shots(o.shots_text);
            const proto::Protocol p{to_protocol(o.protocol), to_gate(o.gate),
                                    g_lists.front().empty() ? 0.1 : g_lists.front().front(),
                                    shots};
            const proto::SweepTarget target{to_setting(o.setting),
                                            proto::observable_id_from_string(o.observable)};
            const auto rows =
                est::sensitivity_analysis(p, target, g_lists, o.degrees, shots, o.trials, o.seed);
            emit(io::sensitivity_to_csv(rows), o.out_path, out);
        });
    }

    // efficiency
    {
        CLI::App* sub = add_sub("efficiency",
                                "Retained ensemble fraction: gate success x post-selection "
                                "probability for a protocol configuration");
        sub->add_option("--protocol", o.protocol, "Which protocol")
            ->check(CLI::IsMember({"kim", "genuine"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--gate", o.gate, "Coupling realization")
            ->check(CLI::IsMember({"ideal", "ppbs"}))
            ->multi_option_policy(kTakeLast);
        sub->add_option("--g", o.g, "Coupling strength")
            ->check(CLI::PositiveNumber)
            ->multi_option_policy(kTakeLast);
        sub->callback([&] {
            const proto::Protocol p{to_protocol(o.protocol), to_gate(o.gate), o.g, std::nullopt};
            emit(efficiency_json(p), o.out_path, out);
        });
    }

    try {
        args = apply_config_files(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const RuntimeFailure& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace cheshire::cli
