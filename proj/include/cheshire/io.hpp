#ifndef CHESHIRE_IO_HPP
#define CHESHIRE_IO_HPP

#include <string>
#include <vector>

#include "cheshire/estimation.hpp"
#include "cheshire/protocols.hpp"

// Serialization with pinned formatting: every number is emitted with 17
// significant digits (%.17g, lowercase scientific), keys in a fixed order,
// so identical inputs produce byte-identical files. Emission is therefore
// hand-rolled; parsing of record documents goes through a JSON parser and
// is format-tolerant.

namespace cheshire::io {

// %.17g — round-trips any double exactly.
std::string format_double(double v);

std::string json_escape(const std::string& s);

// {"re":<re>,"im":<im>}
std::string complex_to_json(const Complex& z);

// One record object with keys observable_id, value, g, shots, setup_id,
// provenance — in that order. shots is an integer or the string "exact".
std::string record_to_json(const protocols::MeasurementRecord& r);

// {"schema":1,"records":[...]} with one record per line.
std::string records_document(const std::vector<protocols::MeasurementRecord>& records);

// Parses a records document (as produced by records_document, or any JSON
// with the same shape). Records without a provenance field are refused.
// Throws PreconditionError on malformed input.
std::vector<protocols::MeasurementRecord> records_from_document(const std::string& text);

// header g,sx_mean,shots,stderr; exact rows carry "exact" in the shots
// column and a zero stderr
std::string sweep_to_csv(const estimation::SweepData& d);

// header degree,g_lo,g_hi,mean_estimate,spread
std::string sensitivity_to_csv(const std::vector<estimation::SensitivityRow>& rows);

} // namespace cheshire::io

#endif
