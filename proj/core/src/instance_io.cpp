#include "ccsm/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccsm/errors.hpp"

namespace ccsm {

namespace {

using Json = nlohmann::ordered_json;

ConcaveFunction parse_function(const Json& descriptor) {
  if (!descriptor.is_object() || !descriptor.contains("family"))
    throw InputError("instance file: \"f\" must be an object with a \"family\" field");
  const std::string family = descriptor.at("family").get<std::string>();
  if (family == "sqrt") return ConcaveFunction::sqrt_scaled(descriptor.value("scale", 1.0));
  if (family == "power") return ConcaveFunction::power(descriptor.at("p").get<double>());
  if (family == "capped_quadratic")
    return ConcaveFunction::capped_quadratic(descriptor.at("c").get<double>());
  if (family == "piecewise_linear")
    return ConcaveFunction::piecewise_linear(
        descriptor.at("breakpoints").get<std::vector<double>>(),
        descriptor.at("slopes").get<std::vector<double>>());
  throw InputError("instance file: unknown function family \"" + family + "\"");
}

Json function_to_json(const ConcaveFunction& f) {
  Json out;
  switch (f.family()) {
    case ConcaveFamily::kSqrtScaled:
      out["family"] = "sqrt";
      out["scale"] = f.scale();
      break;
    case ConcaveFamily::kPower:
      out["family"] = "power";
      out["p"] = f.exponent();
      break;
    case ConcaveFamily::kCappedQuadratic:
      out["family"] = "capped_quadratic";
      out["c"] = f.cap();
      break;
    case ConcaveFamily::kPiecewiseLinear:
      out["family"] = "piecewise_linear";
      out["breakpoints"] = f.breakpoints();
      out["slopes"] = f.slopes();
      break;
  }
  return out;
}

}  // namespace

InstanceFile parse_instance_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance file: ") + e.what());
  }
  try {
    int n = doc.at("n").get<int>();
    int k = doc.at("k").get<int>();
    auto weights = doc.at("a").get<std::vector<double>>();
    if (static_cast<int>(weights.size()) != n)
      throw InputError("instance file: \"a\" length disagrees with \"n\"");
    InstanceFile out{Instance(std::move(weights), k, parse_function(doc.at("f"))),
                     std::nullopt, std::nullopt};
    if (doc.contains("lambda")) {
      out.lambda = doc.at("lambda").get<std::vector<double>>();
      if (static_cast<int>(out.lambda->size()) != n)
        throw InputError("instance file: \"lambda\" length disagrees with \"n\"");
    }
    if (doc.contains("epsilon")) out.epsilon = doc.at("epsilon").get<double>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("instance file: ") + e.what());
  }
}

std::string serialize_instance(const InstanceFile& file) {
  Json doc;
  doc["n"] = file.instance.n();
  doc["k"] = file.instance.k();
  doc["a"] = file.instance.weights();
  doc["f"] = function_to_json(file.instance.f());
  if (file.lambda) doc["lambda"] = *file.lambda;
  if (file.epsilon) doc["epsilon"] = *file.epsilon;
  return doc.dump(2) + "\n";
}

InstanceFile load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_text(buffer.str());
}

void save_instance_file(const InstanceFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file: " + path);
  out << serialize_instance(file);
}

}  // namespace ccsm
