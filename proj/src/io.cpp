#include "sfs/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sfs {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw SchemaError(where + "/" + key, "unknown field");
  for (const char* key : required)
    if (!obj.contains(key)) throw SchemaError(where + "/" + key, "missing required field");
}

std::size_t get_count(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw SchemaError(where + "/" + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

ParamMatrix parse_block(const json& entries, std::size_t rows, std::size_t cols,
                        const std::map<std::string, std::uint32_t>& params, const std::string& where) {
  if (!entries.is_array()) throw SchemaError(where, "expected an array of entries");
  ParamMatrix m(rows, cols, params.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string ew = where + "/" + std::to_string(e);
    const json& entry = entries[e];
    require_keys(entry, ew, {"row", "col", "terms"}, {"row", "col", "terms"});
    const std::size_t row = get_count(entry, "row", ew);
    const std::size_t col = get_count(entry, "col", ew);
    if (row >= rows) throw SchemaError(ew + "/row", "row " + std::to_string(row) + " out of range (block has " + std::to_string(rows) + " rows)");
    if (col >= cols) throw SchemaError(ew + "/col", "column " + std::to_string(col) + " out of range (block has " + std::to_string(cols) + " columns)");
    if (!seen.insert({row, col}).second) throw SchemaError(ew, "duplicate entry for (" + std::to_string(row) + "," + std::to_string(col) + ")");
    const json& terms = entry.at("terms");
    if (!terms.is_array()) throw SchemaError(ew + "/terms", "expected an array of terms");
    std::vector<std::pair<Monomial, Rational>> parsed;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = ew + "/terms/" + std::to_string(t);
      const json& term = terms[t];
      require_keys(term, tw, {"coeff", "monomial"}, {"coeff"});
      if (!term.at("coeff").is_string()) throw SchemaError(tw + "/coeff", "expected a \"num/den\" string");
      Rational c;
      try {
        c = rational_from_string(term.at("coeff").get<std::string>());
      } catch (const std::invalid_argument& ex) {
        throw SchemaError(tw + "/coeff", ex.what());
      }
      Monomial mono;
      if (term.contains("monomial")) {
        const json& mj = term.at("monomial");
        if (!mj.is_object()) throw SchemaError(tw + "/monomial", "expected an object of parameter exponents");
        for (const auto& [name, exp] : mj.items()) {
          auto it = params.find(name);
          if (it == params.end()) throw SchemaError(tw + "/monomial/" + name, "unknown parameter \"" + name + "\"");
          if (!exp.is_number_integer() || exp.get<long long>() < 1)
            throw SchemaError(tw + "/monomial/" + name, "exponent must be a positive integer");
          mono.emplace_back(it->second, exp.get<std::uint32_t>());
        }
      }
      parsed.emplace_back(std::move(mono), c);
    }
    m.set(row, col, ParamPoly::from_terms(parsed));
  }
  return m;
}

json block_to_json(const ParamMatrix& m, const std::vector<std::string>& names) {
  json entries = json::array();
  for (const auto& [key, poly] : m.entries()) {
    json terms = json::array();
    for (const auto& [mono, c] : poly.terms()) {
      json mj = json::object();
      for (const auto& [idx, e] : mono) mj[names.at(idx)] = e;
      terms.push_back({{"coeff", rational_to_string(c)}, {"monomial", mj}});
    }
    entries.push_back({{"row", key.first}, {"col", key.second}, {"terms", terms}});
  }
  return entries;
}

}  // namespace

MultiChannelSystem system_from_json(const json& j) {
  require_keys(j, "", {"schema_version", "n", "parameters", "channels", "A", "B", "C"},
               {"schema_version", "n", "parameters", "channels", "A", "B", "C"});
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSystemSchemaVersion)
    throw SchemaError("/schema_version", "unsupported schema version (expected " + std::to_string(kSystemSchemaVersion) + ")");
  const std::size_t n = get_count(j, "n", "");
  if (n == 0) throw SchemaError("/n", "state dimension must be positive");

  const json& pj = j.at("parameters");
  if (!pj.is_array()) throw SchemaError("/parameters", "expected an array of names");
  std::vector<std::string> names;
  std::map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    if (!pj[i].is_string() || pj[i].get<std::string>().empty())
      throw SchemaError("/parameters/" + std::to_string(i), "expected a non-empty name");
    const auto name = pj[i].get<std::string>();
    if (!index.emplace(name, static_cast<std::uint32_t>(i)).second)
      throw SchemaError("/parameters/" + std::to_string(i), "duplicate parameter name \"" + name + "\"");
    names.push_back(name);
  }

  const json& cj = j.at("channels");
  if (!cj.is_array()) throw SchemaError("/channels", "expected an array");
  std::vector<Channel> channels;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string w = "/channels/" + std::to_string(i);
    require_keys(cj[i], w, {"m", "l"}, {"m", "l"});
    channels.push_back({get_count(cj[i], "m", w), get_count(cj[i], "l", w)});
  }

  ParamMatrix a = parse_block(j.at("A"), n, n, index, "/A");
  const json& bj = j.at("B");
  const json& cbj = j.at("C");
  if (!bj.is_array() || bj.size() != channels.size()) throw SchemaError("/B", "expected one entry list per channel");
  if (!cbj.is_array() || cbj.size() != channels.size()) throw SchemaError("/C", "expected one entry list per channel");
  std::vector<ParamMatrix> bs, cs;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    bs.push_back(parse_block(bj[i], n, channels[i].inputs, index, "/B/" + std::to_string(i)));
    cs.push_back(parse_block(cbj[i], channels[i].outputs, n, index, "/C/" + std::to_string(i)));
  }
  return MultiChannelSystem(n, std::move(channels), std::move(a), std::move(bs), std::move(cs), std::move(names));
}

json system_to_json(const MultiChannelSystem& sys) {
  std::vector<std::string> names = sys.param_names();
  if (names.empty())
    for (std::size_t i = 0; i < sys.q(); ++i) names.push_back("p" + std::to_string(i + 1));
  json j;
  j["schema_version"] = kSystemSchemaVersion;
  j["n"] = sys.n();
  j["parameters"] = names;
  j["channels"] = json::array();
  for (const auto& c : sys.channels()) j["channels"].push_back({{"m", c.inputs}, {"l", c.outputs}});
  j["A"] = block_to_json(sys.A(), names);
  j["B"] = json::array();
  j["C"] = json::array();
  for (std::size_t i = 0; i < sys.k(); ++i) {
    j["B"].push_back(block_to_json(sys.B_block(i), names));
    j["C"].push_back(block_to_json(sys.C_block(i), names));
  }
  return j;
}

MultiChannelSystem parse_system(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < ex.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("line " + std::to_string(line) + ", column " + std::to_string(col), "JSON syntax error");
  }
  try {
    return system_from_json(j);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& ex) {
    throw SchemaError("/", ex.what());
  }
}

MultiChannelSystem load_system(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

}  // namespace sfs
