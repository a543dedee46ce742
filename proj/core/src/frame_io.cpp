#include "veil/frame_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <istream>
#include <sstream>

namespace veil::model {

using lang::TypeExpr;

namespace {

// Sizes and row codecs derived from the spec alone (no domains needed).
struct SpaceInfo {
  const FrameSpec& spec;

  std::uint64_t atom_count() const {
    std::uint64_t n = 0;
    for (const auto& [id, count] : spec.species) {
      (void)id;
      n += count;
    }
    return n;
  }

  std::uint64_t size(const TypeExpr& t) const {
    switch (t.kind()) {
      case TypeExpr::Kind::base1: return atom_count();
      case TypeExpr::Kind::base2: return spec.mtags.size();
      case TypeExpr::Kind::tuple: {
        const std::uint64_t r = rows(t);
        if (r >= 62) throw budget_error("relation space of " + t.to_string() + " too large");
        return std::uint64_t{1} << r;
      }
    }
    return 0;
  }

  std::uint64_t rows(const TypeExpr& t) const {
    std::uint64_t r = 1;
    for (const auto& c : t.components()) {
      const std::uint64_t s = size(c);
      if (r == 0 || s == 0) {
        r = 0;
        continue;
      }
      r *= s;
      if (r > (std::uint64_t{1} << 62)) {
        throw budget_error("relation space of " + t.to_string() + " too large");
      }
    }
    return r;
  }

  std::pair<std::string, std::uint32_t> species_of(std::uint64_t label) const {
    for (const auto& [id, count] : spec.species) {
      if (label < count) return {id, static_cast<std::uint32_t>(label)};
      label -= count;
    }
    throw domain_error("atom label out of range");
  }

  std::uint64_t label_of(const std::string& species, std::uint32_t index) const {
    std::uint64_t offset = 0;
    for (const auto& [id, count] : spec.species) {
      if (id == species) {
        if (index >= count) {
          throw domain_error("atom " + species + "." + std::to_string(index) +
                             " out of range");
        }
        return offset + index;
      }
      offset += count;
    }
    throw domain_error("unknown species '" + species + "'");
  }
};

void print_value(const SpaceInfo& info, const Value& v, std::ostringstream& out) {
  switch (v.type.kind()) {
    case TypeExpr::Kind::base1: {
      auto [species, index] = info.species_of(v.bits);
      out << species << "." << index;
      return;
    }
    case TypeExpr::Kind::base2:
      if (v.bits >= info.spec.mtags.size()) throw domain_error("M index out of range");
      out << info.spec.mtags[v.bits];
      return;
    case TypeExpr::Kind::tuple: {
      out << "{";
      bool first = true;
      for (std::uint64_t rest = v.bits; rest; rest &= rest - 1) {
        std::uint64_t row = static_cast<std::uint64_t>(std::countr_zero(rest));
        out << (first ? "" : ", ") << "(";
        bool first_elem = true;
        for (const auto& c : v.type.components()) {
          const std::uint64_t s = info.size(c);
          out << (first_elem ? "" : ", ");
          print_value(info, Value{c, row % s}, out);
          row /= s;
          first_elem = false;
        }
        out << ")";
        first = false;
      }
      out << "}";
      return;
    }
  }
}

class ValueParser {
 public:
  ValueParser(const SpaceInfo& info, std::string_view text, int lineno)
      : info_(info), text_(text), lineno_(lineno) {}

  Value parse(const TypeExpr& type) {
    Value v = parse_value(type);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after element");
    return v;
  }

  // comma-separated list of values of one type
  std::vector<Value> parse_list(const TypeExpr& type) {
    std::vector<Value> out;
    out.push_back(parse_value(type));
    skip_ws();
    while (try_consume(',')) out.push_back(parse_value(type));
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after element list");
    return out;
  }

 private:
  const SpaceInfo& info_;
  std::string_view text_;
  std::size_t pos_ = 0;
  int lineno_;

  [[noreturn]] void fail(const std::string& msg) {
    throw parse_error("frame file: " + msg, lineno_,
                      static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::uint32_t number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected a number");
    return static_cast<std::uint32_t>(
        std::stoul(std::string(text_.substr(start, pos_ - start))));
  }

  Value parse_value(const TypeExpr& type) {
    skip_ws();
    switch (type.kind()) {
      case TypeExpr::Kind::base1: {
        std::string species = ident();
        expect('.');
        std::uint32_t index = number();
        try {
          return Value{type, info_.label_of(species, index)};
        } catch (const domain_error& e) {
          fail(e.what());
        }
      }
      case TypeExpr::Kind::base2: {
        std::string tag = ident();
        auto it = std::find(info_.spec.mtags.begin(), info_.spec.mtags.end(), tag);
        if (it == info_.spec.mtags.end()) fail("unknown M tag '" + tag + "'");
        return Value{type, static_cast<std::uint64_t>(
                               std::distance(info_.spec.mtags.begin(), it))};
      }
      case TypeExpr::Kind::tuple: {
        expect('{');
        std::uint64_t mask = 0;
        skip_ws();
        if (!try_consume('}')) {
          for (;;) {
            expect('(');
            std::uint64_t row = 0;
            std::uint64_t stride = 1;
            const auto& comps = type.components();
            for (std::size_t i = 0; i < comps.size(); ++i) {
              if (i) expect(',');
              Value elem = parse_value(comps[i]);
              row += elem.bits * stride;
              stride *= info_.size(comps[i]);
            }
            expect(')');
            mask |= std::uint64_t{1} << row;
            if (try_consume('}')) break;
            expect(',');
          }
        }
        return Value{type, mask};
      }
    }
    fail("unsupported type");
  }
};

std::string strip_comment(const std::string& line) {
  std::string out = line;
  auto hash = out.find('#');
  if (hash != std::string::npos) out.erase(hash);
  while (!out.empty() &&
         (out.back() == ' ' || out.back() == '\t' || out.back() == '\r')) {
    out.pop_back();
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '<' || c == '{' || c == '(') ++depth;
    if (c == '>' || c == '}' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.find_first_not_of(" \t") != std::string::npos) parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

FrameDocument parse_frame_document(std::istream& in) {
  FrameDocument doc;
  doc.spec.kind = FrameKind::standard;
  bool have_m = false, have_M = false;

  // domain/denote/assign lines are parsed after the header so the spec's
  // species and tags are known
  struct Pending {
    enum class What { domain, denote, assign } what;
    std::string head;  // type text or name^type
    std::string value;
    int lineno;
  };
  std::vector<Pending> pending;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw parse_error("frame file: expected 'key: value'", lineno, 1);
    }
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));

    if (key == "m") {
      have_m = true;
      for (const auto& part : split_commas(value)) {
        auto sep = part.find(':');
        if (sep == std::string::npos) {
          throw parse_error("frame file: species need 'name:count'", lineno, 1);
        }
        std::string name = trim(part.substr(0, sep));
        std::string count = trim(part.substr(sep + 1));
        doc.spec.species.emplace_back(name, std::stoul(count));
      }
    } else if (key == "M") {
      have_M = true;
      for (const auto& part : split_commas(value)) doc.spec.mtags.push_back(trim(part));
    } else if (key == "kind") {
      doc.spec.kind = frame_kind_from_string(value);
    } else if (key == "types") {
      for (const auto& part : split_commas(value)) {
        doc.spec.types.push_back(lang::parse_type(trim(part)));
      }
    } else if (key.rfind("domain ", 0) == 0) {
      pending.push_back({Pending::What::domain, trim(key.substr(7)), value, lineno});
    } else if (key.rfind("denote ", 0) == 0) {
      pending.push_back({Pending::What::denote, trim(key.substr(7)), value, lineno});
    } else if (key.rfind("assign ", 0) == 0) {
      pending.push_back({Pending::What::assign, trim(key.substr(7)), value, lineno});
    } else {
      throw parse_error("frame file: unknown key '" + key + "'", lineno, 1);
    }
  }

  if (!have_m) {
    // an absent m line means an empty pool
  }
  if (!have_M || doc.spec.mtags.empty()) {
    throw parse_error("frame file: M must be declared and non-empty", lineno + 1, 1);
  }

  SpaceInfo info{doc.spec};
  for (const auto& p : pending) {
    switch (p.what) {
      case Pending::What::domain: {
        TypeExpr t = lang::parse_type(p.head);
        std::vector<std::uint64_t> rels;
        for (const auto& v : ValueParser(info, p.value, p.lineno).parse_list(t)) {
          rels.push_back(v.bits);
        }
        std::sort(rels.begin(), rels.end());
        rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
        doc.spec.custom_domains.emplace(t, std::move(rels));
        if (std::find(doc.spec.types.begin(), doc.spec.types.end(), t) ==
            doc.spec.types.end()) {
          doc.spec.types.push_back(t);
        }
        break;
      }
      case Pending::What::denote:
      case Pending::What::assign: {
        auto caret = p.head.find('^');
        if (caret == std::string::npos) {
          throw parse_error("frame file: expected name^type", p.lineno, 1);
        }
        std::string name = trim(p.head.substr(0, caret));
        TypeExpr t = lang::parse_type(trim(p.head.substr(caret + 1)));
        Value v = ValueParser(info, p.value, p.lineno).parse(t);
        if (p.what == Pending::What::denote) {
          doc.denotation.insert_or_assign(name, v);
          doc.symbols.insert_or_assign(name,
                                       lang::SymbolInfo{lang::Term::Kind::constant, t});
        } else {
          doc.valuation.insert_or_assign(name, v);
          doc.symbols.insert_or_assign(name,
                                       lang::SymbolInfo{lang::Term::Kind::variable, t});
        }
        break;
      }
    }
  }

  return doc;
}

FrameDocument parse_frame_document_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_frame_document(in);
}

std::string value_to_text(const FrameSpec& spec, const Value& v) {
  SpaceInfo info{spec};
  std::ostringstream out;
  print_value(info, v, out);
  return out.str();
}

std::string to_text(const FrameDocument& doc) {
  std::ostringstream out;
  out << "m:";
  for (std::size_t i = 0; i < doc.spec.species.size(); ++i) {
    out << (i ? ", " : " ") << doc.spec.species[i].first << ":"
        << doc.spec.species[i].second;
  }
  out << "\n";
  out << "M:";
  for (std::size_t i = 0; i < doc.spec.mtags.size(); ++i) {
    out << (i ? ", " : " ") << doc.spec.mtags[i];
  }
  out << "\n";
  out << "kind: " << to_string(doc.spec.kind) << "\n";
  if (!doc.spec.types.empty()) {
    out << "types:";
    for (std::size_t i = 0; i < doc.spec.types.size(); ++i) {
      out << (i ? ", " : " ") << doc.spec.types[i].to_string();
    }
    out << "\n";
  }
  for (const auto& [t, rels] : doc.spec.custom_domains) {
    out << "domain " << t.to_string() << ":";
    for (std::size_t i = 0; i < rels.size(); ++i) {
      out << (i ? ", " : " ") << value_to_text(doc.spec, Value{t, rels[i]});
    }
    out << "\n";
  }
  for (const auto& [name, v] : doc.denotation) {
    out << "denote " << name << "^" << v.type.to_string() << ": "
        << value_to_text(doc.spec, v) << "\n";
  }
  for (const auto& [name, v] : doc.valuation) {
    out << "assign " << name << "^" << v.type.to_string() << ": "
        << value_to_text(doc.spec, v) << "\n";
  }
  return out.str();
}

FrameDocument document_from_point(const InterpretationPoint& point) {
  FrameDocument doc;
  doc.spec = point.frame_spec;
  doc.denotation = point.denotation;
  doc.valuation = point.valuation;
  for (const auto& [name, v] : point.denotation) {
    doc.symbols.insert_or_assign(name,
                                 lang::SymbolInfo{lang::Term::Kind::constant, v.type});
  }
  for (const auto& [name, v] : point.valuation) {
    doc.symbols.insert_or_assign(name,
                                 lang::SymbolInfo{lang::Term::Kind::variable, v.type});
  }
  return doc;
}

}  // namespace veil::model
