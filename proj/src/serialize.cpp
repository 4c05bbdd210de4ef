#include "camnet/serialize.hpp"

#include "json.hpp"

namespace camnet {

using nlohmann::json;

std::string nil_element_json(const NilElement<Rat>& x, const std::string& code) {
  json root;
  root["system"] = code;
  json coeffs = json::object();
  for (const auto& [r, c] : x.coeffs) coeffs[std::to_string(r)] = rat_str(c);
  root["coeffs"] = coeffs;
  return root.dump();
}

NilElement<Rat> nil_element_from_json(const std::string& text) {
  json root = json::parse(text);
  const ChevalleyTable& t = chevalley_table(root.at("system").get<std::string>());
  NilElement<Rat> x(t);
  for (const auto& [key, val] : root.at("coeffs").items()) {
    RootIndex r = std::stoi(key);
    if (r < 0 || r >= t.rootsys().num_roots())
      throw CamnetError("Internal", "root index out of range in element JSON");
    x.set(r, rat_parse(val.get<std::string>()));
  }
  return x;
}

std::string chevalley_table_json(const std::string& code) {
  const ChevalleyTable& t = chevalley_table(code);
  const RootSystem& rs = t.rootsys();
  json root;
  root["system"] = code;
  json consts = json::object();
  for (RootIndex a = 0; a < rs.num_roots(); ++a)
    for (RootIndex b = 0; b < rs.num_roots(); ++b) {
      if (a == b || b == rs.negative[a] || rs.sum(a, b) < 0) continue;
      consts[std::to_string(a) + "," + std::to_string(b)] = t.structure_constant(a, b);
    }
  root["constants"] = consts;
  json roots = json::array();
  for (const auto& v : rs.roots) roots.push_back(v);
  root["roots"] = roots;
  return root.dump(1);
}

}  // namespace camnet
