#pragma once

#include <string>

#include "json.hpp"

#include "qrec/distinguish.hpp"
#include "qrec/phase.hpp"
#include "qrec/structure.hpp"
#include "qrec/thermo.hpp"

namespace qrec {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Rows of numbers or [re, im] pairs.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

/// {n, gate_set, gates: [{name, targets}]}
Json circuit_to_json(const GateSet& gs, const Circuit& c);
Circuit circuit_from_json(const Json& j, const GateSet& gs);

/// A circuit file, {gate_set, n, c, code}, or {matrix}.
DevicePtr device_from_json(const Json& j);
DevicePtr load_device(const std::string& path);

/// {matrix} (real or complex Hermitian) or {levels: [{energy, degeneracy}]}.
HamiltonianSpec hamiltonian_from_json(const Json& j);
Json levels_to_json(const std::vector<Level>& levels);

SpectrumSpec spectrum_spec_from_json(const Json& j);
Json to_json(const SpectrumSpec& s);

/// {M, L, provenance, table: {"l": h}}
FrequencyTable frequency_table_from_json(const Json& j);
Json to_json(const FrequencyTable& t);

Json to_json(const EigenQuery& q);
void update_from_json(EigenQuery& q, const Json& j);
Json to_json(const ThermoOptions& o);
void update_from_json(ThermoOptions& o, const Json& j);
Json to_json(const StructureOptions& o);
void update_from_json(StructureOptions& o, const Json& j);
Json to_json(const DistinguishOptions& o);
void update_from_json(DistinguishOptions& o, const Json& j);

Json to_json(const QueryCounter& c);
Json to_json(const RecognitionReport& r, bool registers = false);
Json to_json(const ThermoReport& r);
Json to_json(const MatchVerdict& v);
Json to_json(const StructureReport& r);
Json to_json(const StructureDecision& d);
Json to_json(const Subspaces& s);
Json to_json(const DifferenceReport& r);
Json to_json(const DeviceReport& r);
Json to_json(const DeviceDecision& d);

std::string thermo_csv(const ThermoReport& r);

}  // namespace qrec
