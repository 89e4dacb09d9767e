#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pmsval/engine.hpp"
#include "pmsval/groups.hpp"
#include "pmsval/oracle.hpp"
#include "pmsval/pms.hpp"
#include "pmsval/rank.hpp"

namespace pmsval::io {

using json = nlohmann::json;

// Parsing throws SchemaError with a JSON-pointer-like location.

ExactReal parse_exact(const json& j, const std::string& where);
json to_json(const ExactReal& x);

Component parse_component(const json& j, const std::string& where);
json to_json(const Component& c);

GroupDescriptor parse_group(const json& j, const std::string& where);
json to_json(const GroupDescriptor& g);

GroupElement parse_element(const json& j, const std::string& where);
json to_json(const GroupElement& g);

ExtendedValue parse_extended(const json& j, const std::string& where);
json to_json(const ExtendedValue& v);

StageChain parse_chain(const json& j, const std::string& where);
json to_json(const StageChain& c);

/// `fallback_group` is used when the descriptor has no "group" member.
PmsDescriptor parse_pms(const json& j, const std::string& where, const GroupDescriptor* fallback_group = nullptr);
json to_json(const PmsDescriptor& e);

FactoredRationalFunction parse_frf(const json& j, const std::string& where);
json to_json(const FactoredRationalFunction& f);

UltrametricConfiguration parse_configuration(const json& j, const std::string& where,
                                             const GroupDescriptor* fallback_group = nullptr);

ConcreteField parse_field(const json& j, const std::string& where);
RationalFunction parse_field_element(const json& j, const std::string& where);
json to_json(const RationalFunction& x);
ConcreteFunction parse_concrete_function(const json& j, const std::string& where);

json to_json(const DominatingForm& f);
json to_json(const TreeTrace& t);
json to_json(const SupInf& s);
json to_json(const ExtensionReport& r);
json to_json(const FitResult& f);

}  // namespace pmsval::io
