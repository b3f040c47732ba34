#include "medgrad/tjson.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace medgrad {

std::string to_tjson(const Tensor& t) {
  nlohmann::ordered_json doc;
  doc["shape"] = t.shape();
  doc["data"] = t.values();
  return doc.dump();
}

Tensor from_tjson(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.contains("shape") || !doc.contains("data")) {
    throw std::invalid_argument("tjson: missing shape or data field");
  }
  return Tensor(doc["shape"].get<std::vector<std::size_t>>(),
                doc["data"].get<std::vector<double>>());
}

void write_tjson(const std::string& path, const Tensor& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("tjson: cannot open " + path + " for writing");
  out << to_tjson(t) << '\n';
}

Tensor read_tjson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("tjson: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_tjson(text);
}

}  // namespace medgrad
