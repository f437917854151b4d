#include "fprw/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fprw {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ParseError(std::string(where) + ": unknown field '" + it.key() +
                       "'");
    }
  }
}

const json& require(const json& obj, const char* where, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw ParseError(std::string(where) + ": missing field '" + field + "'");
  }
  return *it;
}

FactorSpec parse_factor(const json& obj, const char* where) {
  if (!obj.is_object()) {
    throw ParseError(std::string(where) + ": expected an object");
  }
  reject_unknown(obj, where, {"size", "root", "matrix", "labels"});
  FactorSpec f;
  const json& size = require(obj, where, "size");
  const json& root = require(obj, where, "root");
  const json& matrix = require(obj, where, "matrix");
  if (!size.is_number_integer() || !root.is_number_integer()) {
    throw ParseError(std::string(where) + ": size and root must be integers");
  }
  f.size = size.get<int>();
  f.root = root.get<int>();
  if (!matrix.is_array()) {
    throw ParseError(std::string(where) + ".matrix: expected array of rows");
  }
  for (const json& row : matrix) {
    if (!row.is_array()) {
      throw ParseError(std::string(where) + ".matrix: expected array rows");
    }
    std::vector<double> r;
    for (const json& v : row) {
      if (!v.is_number()) {
        throw ParseError(std::string(where) +
                         ".matrix: entries must be numbers");
      }
      r.push_back(v.get<double>());
    }
    f.matrix.push_back(std::move(r));
  }
  if (auto it = obj.find("labels"); it != obj.end()) {
    if (!it->is_array()) {
      throw ParseError(std::string(where) + ".labels: expected array");
    }
    for (const json& v : *it) {
      if (!v.is_string()) {
        throw ParseError(std::string(where) + ".labels: entries must be strings");
      }
      f.labels.push_back(v.get<std::string>());
    }
  }
  return f;
}

}  // namespace

ModelSpec parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document: expected an object");
  reject_unknown(doc, "model", {"alpha", "factor1", "factor2", "claims"});
  ModelSpec spec;
  const json& alpha = require(doc, "model", "alpha");
  if (!alpha.is_number()) throw ParseError("alpha: expected a number");
  spec.alpha = alpha.get<double>();
  spec.factor1 = parse_factor(require(doc, "model", "factor1"), "factor1");
  spec.factor2 = parse_factor(require(doc, "model", "factor2"), "factor2");
  if (auto it = doc.find("claims"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("claims: expected an object");
    reject_unknown(*it, "claims", {"transient", "green_radius_gt_one"});
    if (auto c = it->find("transient"); c != it->end()) {
      if (!c->is_boolean()) throw ParseError("claims.transient: expected bool");
      spec.claims.transient = c->get<bool>();
    }
    if (auto c = it->find("green_radius_gt_one"); c != it->end()) {
      if (!c->is_boolean()) {
        throw ParseError("claims.green_radius_gt_one: expected bool");
      }
      spec.claims.green_radius_gt_one = c->get<bool>();
    }
  }
  return spec;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const ModelSpec& spec) {
  json doc;
  doc["alpha"] = spec.alpha;
  for (FactorId f : {FactorId::one, FactorId::two}) {
    const FactorSpec& fs = spec.factor(f);
    json obj;
    obj["size"] = fs.size;
    obj["root"] = fs.root;
    obj["matrix"] = fs.matrix;
    if (!fs.labels.empty()) obj["labels"] = fs.labels;
    doc[f == FactorId::one ? "factor1" : "factor2"] = std::move(obj);
  }
  if (spec.claims.transient || spec.claims.green_radius_gt_one) {
    json claims;
    if (spec.claims.transient) claims["transient"] = *spec.claims.transient;
    if (spec.claims.green_radius_gt_one) {
      claims["green_radius_gt_one"] = *spec.claims.green_radius_gt_one;
    }
    doc["claims"] = std::move(claims);
  }
  return doc.dump(2) + "\n";
}

void save_model(const ModelSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out << serialize_model(spec);
}

}  // namespace fprw
