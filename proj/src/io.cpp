#include "cheshire/io.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace cheshire::io {

using protocols::Inferred;
using protocols::Measured;
using protocols::MeasurementRecord;
using protocols::Provenance;
using protocols::Reconstructed;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::string complex_to_json(const Complex& z) {
    return "{\"re\":" + format_double(z.real()) + ",\"im\":" + format_double(z.imag()) + "}";
}

namespace {

std::string provenance_to_json(const Provenance& p) {
    if (std::holds_alternative<Measured>(p)) {
        return "{\"kind\":\"Measured\"}";
    }
    if (const auto* rec = std::get_if<Reconstructed>(&p)) {
        std::string out = "{\"kind\":\"Reconstructed\",\"sources\":[";
        for (std::size_t i = 0; i < rec->sources.size(); ++i) {
            if (i > 0) out += ",";
            out += "\"" + json_escape(rec->sources[i]) + "\"";
        }
        return out + "]}";
    }
    const auto& inf = std::get<Inferred>(p);
    return "{\"kind\":\"Inferred\",\"rule\":\"" + json_escape(inf.rule) + "\"}";
}

} // namespace

std::string record_to_json(const MeasurementRecord& r) {
    std::string shots = r.shots ? std::to_string(*r.shots) : "\"exact\"";
    return "{\"observable_id\":\"" + protocols::to_string(r.observable_id) +
           "\",\"value\":" + complex_to_json(r.value) + ",\"g\":" + format_double(r.g) +
           ",\"shots\":" + shots + ",\"setup_id\":\"" + json_escape(r.setup_id) +
           "\",\"provenance\":" + provenance_to_json(r.provenance) + "}";
}

std::string records_document(const std::vector<MeasurementRecord>& records) {
    std::string out = "{\"schema\":1,\"records\":[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        out += (i == 0) ? "\n" : ",\n";
        out += record_to_json(records[i]);
    }
    out += "\n]}\n";
    return out;
}

namespace {

using nlohmann::json;

MeasurementRecord record_from_json(const json& j) {
    if (!j.is_object()) {
        throw PreconditionError("record is not a JSON object");
    }
    for (const char* key : {"observable_id", "value", "g", "shots", "setup_id"}) {
        if (!j.contains(key)) {
            throw PreconditionError(std::string("record is missing the '") + key + "' field");
        }
    }
    if (!j.contains("provenance")) {
        throw PreconditionError("record without provenance refused");
    }

    MeasurementRecord r;
    r.observable_id = protocols::observable_id_from_string(j.at("observable_id").get<std::string>());
    const json& v = j.at("value");
    if (!v.is_object() || !v.contains("re") || !v.contains("im")) {
        throw PreconditionError("record value must be an object with 're' and 'im'");
    }
    r.value = Complex(v.at("re").get<double>(), v.at("im").get<double>());
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag())) {
        throw NonFiniteValueError("record value is not finite");
    }
    r.g = j.at("g").get<double>();
    if (!(r.g > 0.0) || !std::isfinite(r.g)) {
        throw PreconditionError("record strength must be positive and finite");
    }
    const json& shots = j.at("shots");
    if (shots.is_string()) {
        if (shots.get<std::string>() != "exact") {
            throw PreconditionError("record shots must be an integer or \"exact\"");
        }
        r.shots = std::nullopt;
    } else if (shots.is_number_unsigned() || shots.is_number_integer()) {
        const std::int64_t n = shots.get<std::int64_t>();
        if (n < 1) {
            throw PreconditionError("record shots must be at least 1");
        }
        r.shots = static_cast<std::uint64_t>(n);
    } else {
        throw PreconditionError("record shots must be an integer or \"exact\"");
    }
    r.setup_id = j.at("setup_id").get<std::string>();

    const json& prov = j.at("provenance");
    if (!prov.is_object() || !prov.contains("kind")) {
        throw PreconditionError("record provenance must name its kind");
    }
    const std::string kind = prov.at("kind").get<std::string>();
    if (kind == "Measured") {
        r.provenance = Measured{};
    } else if (kind == "Reconstructed") {
        if (!prov.contains("sources") || !prov.at("sources").is_array() ||
            prov.at("sources").size() < 2) {
            throw PreconditionError("reconstructed records must name at least two source setups");
        }
        Reconstructed rec;
        for (const json& s : prov.at("sources")) rec.sources.push_back(s.get<std::string>());
        r.provenance = std::move(rec);
    } else if (kind == "Inferred") {
        if (!prov.contains("rule")) {
            throw PreconditionError("inferred records must name their rule");
        }
        const std::string rule = prov.at("rule").get<std::string>();
        if (rule != "complement_rule" && rule != "sum_rule") {
            throw PreconditionError("unknown inference rule '" + rule + "'");
        }
        r.provenance = Inferred{rule};
    } else {
        throw PreconditionError("unknown provenance kind '" + kind + "'");
    }
    return r;
}

} // namespace

std::vector<MeasurementRecord> records_from_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("malformed records document: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("schema") || doc.at("schema").get<int>() != 1) {
            throw PreconditionError("records document must declare \"schema\": 1");
        }
        if (!doc.contains("records") || !doc.at("records").is_array()) {
            throw PreconditionError("records document must carry a \"records\" array");
        }
        std::vector<MeasurementRecord> out;
        for (const json& j : doc.at("records")) out.push_back(record_from_json(j));
        return out;
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("malformed records document: ") + e.what());
    }
}

std::string sweep_to_csv(const estimation::SweepData& d) {
    std::string out = "g,sx_mean,shots,stderr\n";
    for (const estimation::SweepRow& r : d.rows) {
        out += format_double(r.g) + "," + format_double(r.sx_mean) + ",";
        out += r.shots ? std::to_string(*r.shots) : "exact";
        out += "," + format_double(r.std_error) + "\n";
    }
    return out;
}

std::string sensitivity_to_csv(const std::vector<estimation::SensitivityRow>& rows) {
    std::string out = "degree,g_lo,g_hi,mean_estimate,spread\n";
    for (const estimation::SensitivityRow& r : rows) {
        out += std::to_string(r.degree) + "," + format_double(r.g_lo) + "," +
               format_double(r.g_hi) + "," + format_double(r.mean_estimate) + "," +
               format_double(r.spread) + "\n";
    }
    return out;
}

} // namespace cheshire::io
