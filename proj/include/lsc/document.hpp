#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lsc/derivation.hpp"
#include "lsc/evaluator.hpp"

namespace lsc {

class DocumentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DerivationDocument {
  SystemId system;
  Derivation root;
};

nlohmann::json type_to_json(const LinearType &l);
nlohmann::json type_to_json(const MultiType &m);
LinearType linear_from_json(const nlohmann::json &j, Family f);
MultiType multi_from_json(const nlohmann::json &j, Family f);

nlohmann::json to_json(const DerivationDocument &doc);
DerivationDocument document_from_json(const nlohmann::json &j);
// Parses text; throws DocumentError with the parser's diagnostics.
DerivationDocument parse_document(const std::string &text);

nlohmann::json trace_to_json(const EvalResult &r, StrategyId s);

} // namespace lsc
