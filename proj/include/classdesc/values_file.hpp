#ifndef CLASSDESC_VALUES_FILE_HPP
#define CLASSDESC_VALUES_FILE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "classdesc/registry.hpp"
#include "classdesc/value.hpp"

namespace classdesc {

// The values-file format: one `path = literal` line per primitive leaf, in
// pack traversal order. Paths reuse descriptor naming rooted at the empty
// name: `.x`, `.z[5]`, `.next.x`. Single-object pointers appear as
// `path = ptr` (followed by their pointee's leaves) or `path = null`.
// Union blobs are `path = bytes:HEX`. Skipped (generic/member) pointers
// never appear. Blank lines and lines starting with '#' are ignored.

namespace detail {

inline void write_values_rec(const Value& v, const TypeExpr& type,
                             const std::string& name, const Registry& reg,
                             std::string& out) {
  TypeExpr t = reg.resolve(type);
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive:
      out += name + " = " + primitive_text(t.primitive_kind(), v.payload()) + "\n";
      return;
    case TypeExpr::Variant::Array:
      for (std::size_t i = 0; i < v.elements().size(); ++i)
        write_values_rec(v.elements()[i], t.element(),
                         name + "[" + std::to_string(i) + "]", reg, out);
      return;
    case TypeExpr::Variant::Pointer:
      if (v.is_skipped_pointer()) return;
      if (!v.present()) {
        out += name + " = null\n";
        return;
      }
      out += name + " = ptr\n";
      if (t.has_pointee())
        write_values_rec(*v.pointee(), t.pointee(), name, reg, out);
      return;
    case TypeExpr::Variant::Named: {
      const ClassDecl* cls = reg.find_class(t.name());
      if (!cls) throw PackError("cannot write value of undeclared type '" + t.name() + "'");
      if (cls->kind == ClassKind::Union) {
        static const char* hex = "0123456789ABCDEF";
        std::string text;
        for (std::uint8_t b : v.bytes()) {
          text += hex[b >> 4];
          text += hex[b & 0xF];
        }
        out += name + " = bytes:" + text + "\n";
        return;
      }
      std::size_t f = 0;
      for (const auto& b : cls->bases)
        write_values_rec(v.fields()[f++], TypeExpr::named(b.name), name, reg, out);
      for (const auto& m : cls->members) {
        if (!m.serializable) continue;
        write_values_rec(v.fields()[f++], m.type, name + "." + m.name, reg, out);
      }
      return;
    }
  }
}

// One step of path navigation: ".member" or "[index]".
struct PathToken {
  bool is_index = false;
  std::string member;
  std::size_t index = 0;
};

inline std::vector<PathToken> split_path(const std::string& path) {
  std::vector<PathToken> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '.') {
      std::size_t j = i + 1;
      while (j < path.size() && path[j] != '.' && path[j] != '[') ++j;
      PathToken t;
      t.member = path.substr(i + 1, j - i - 1);
      if (t.member.empty())
        throw PackError("malformed value path '" + path + "'");
      out.push_back(std::move(t));
      i = j;
    } else if (path[i] == '[') {
      std::size_t j = path.find(']', i);
      if (j == std::string::npos)
        throw PackError("malformed value path '" + path + "'");
      PathToken t;
      t.is_index = true;
      std::string digits = path.substr(i + 1, j - i - 1);
      if (digits.empty()) throw PackError("malformed value path '" + path + "'");
      for (char c : digits)
        if (c < '0' || c > '9')
          throw PackError("malformed value path '" + path + "'");
      t.index = std::stoull(digits);
      out.push_back(std::move(t));
      i = j + 1;
    } else {
      throw PackError("malformed value path '" + path + "'");
    }
  }
  return out;
}

// Find `member` in cls directly or in its bases (depth-first), returning
// the target value slot and its type. Base members address as if they were
// the object's own, matching the descriptor's unchanged-name convention.
inline bool find_member_slot(Value& v, const ClassDecl& cls, const Registry& reg,
                             const std::string& member, Value** out_value,
                             TypeExpr* out_type) {
  std::size_t f = 0;
  for (const auto& b : cls.bases) {
    const ClassDecl* base = reg.find_class(b.name);
    if (base && f < v.fields().size() &&
        find_member_slot(v.fields()[f], *base, reg, member, out_value, out_type))
      return true;
    ++f;
  }
  for (const auto& m : cls.members) {
    if (!m.serializable) continue;
    if (m.name == member) {
      if (f >= v.fields().size()) return false;
      *out_value = &v.fields()[f];
      *out_type = m.type;
      return true;
    }
    ++f;
  }
  return false;
}

inline void assign_leaf(Value& v, const TypeExpr& type, const std::string& literal,
                        const std::string& path, const Registry& reg) {
  TypeExpr t = reg.resolve(type);
  if (t.is_pointer()) {
    if (classify_pointer(t, reg) != PointerKind::SingleObject)
      throw PackError("pointer at '" + path +
                      "' is skipped by pointer policy and cannot be assigned");
    if (literal == "null") {
      v = Value::pointer_absent();
      return;
    }
    if (literal == "ptr") {
      if (!t.has_pointee())
        throw PackError("cannot point at an unknown pointee type at '" + path + "'");
      v = Value::pointer_to(default_value(t.pointee(), reg));
      return;
    }
    throw PackError("pointer at '" + path + "' takes 'ptr' or 'null', got '" +
                    literal + "'");
  }
  if (t.is_primitive()) {
    v = Value::primitive(t.primitive_kind(),
                         parse_primitive_text(t.primitive_kind(), literal));
    return;
  }
  if (t.is_named()) {
    const ClassDecl* cls = reg.find_class(t.name());
    if (cls && cls->kind == ClassKind::Union) {
      if (literal.rfind("bytes:", 0) != 0)
        throw PackError("union at '" + path + "' takes a bytes:HEX literal");
      std::string hex = literal.substr(6);
      if (hex.size() % 2 != 0)
        throw PackError("odd-length hex literal at '" + path + "'");
      std::vector<std::uint8_t> bytes;
      auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw PackError("bad hex digit in literal at '" + path + "'");
      };
      for (std::size_t i = 0; i < hex.size(); i += 2)
        bytes.push_back(
            static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
      v = Value::union_blob(std::move(bytes));
      return;
    }
  }
  throw PackError("path '" + path + "' does not name an assignable leaf");
}

}  // namespace detail

/// Render a value as values-file text, leaves in pack traversal order.
inline std::string write_values(const Value& v, const TypeExpr& type,
                                const Registry& reg) {
  std::string out;
  detail::write_values_rec(v, type, "", reg, out);
  return out;
}

/// Apply one `path = literal` assignment to a value tree.
inline void apply_assignment(Value& root, const TypeExpr& root_type,
                             const std::string& path, const std::string& literal,
                             const Registry& reg) {
  std::vector<detail::PathToken> tokens = detail::split_path(path);

  Value* v = &root;
  TypeExpr t = reg.resolve(root_type);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    // Present pointers are transparent to deeper paths.
    while (t.is_pointer() && v->is_maybe_pointer()) {
      if (!v->present())
        throw PackError("path '" + path + "' descends through an absent pointer");
      if (!t.has_pointee())
        throw PackError("path '" + path + "' descends through an unknown pointee");
      v = v->pointee().get();
      t = reg.resolve(t.pointee());
    }
    const detail::PathToken& tok = tokens[i];
    if (t.is_pointer() && v->is_skipped_pointer())
      throw PackError("path '" + path + "' descends through a skipped pointer");
    if (tok.is_index) {
      if (!t.is_array() || !v->is_array())
        throw PackError("path '" + path + "' indexes a non-array");
      if (tok.index >= v->elements().size())
        throw PackError("index out of range in path '" + path + "'");
      v = &v->elements()[tok.index];
      t = reg.resolve(t.element());
      continue;
    }
    if (!t.is_named())
      throw PackError("path '" + path + "' selects a member of a non-record");
    const ClassDecl* cls = reg.find_class(t.name());
    if (!cls)
      throw PackError("path '" + path + "' crosses undeclared type '" + t.name() + "'");
    Value* next = nullptr;
    TypeExpr next_type = TypeExpr::named("");
    if (!detail::find_member_slot(*v, *cls, reg, tok.member, &next, &next_type))
      throw PackError("unknown member '" + tok.member + "' in path '" + path + "'");
    v = next;
    t = reg.resolve(next_type);
  }
  detail::assign_leaf(*v, t, literal, path, reg);
}

/// Parse values-file text and apply every assignment to a default-built
/// value of `root_type`.
inline Value read_values(const std::string& text, const TypeExpr& root_type,
                         const Registry& reg) {
  Value root = default_value(root_type, reg);
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++line_no;
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;

    // Trim.
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line[0] == '#') continue;

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw PackError("values file line " + std::to_string(line_no) +
                      ": expected 'path = literal'");
    std::string path = line.substr(0, eq);
    std::string literal = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      std::size_t b2 = s.find_first_not_of(" \t");
      std::size_t e2 = s.find_last_not_of(" \t");
      s = b2 == std::string::npos ? "" : s.substr(b2, e2 - b2 + 1);
    };
    trim(path);
    trim(literal);
    // An empty path addresses the root itself (a union blob writes that way).
    if (literal.empty())
      throw PackError("values file line " + std::to_string(line_no) +
                      ": expected 'path = literal'");
    apply_assignment(root, root_type, path, literal, reg);
  }
  return root;
}

}  // namespace classdesc

#endif  // CLASSDESC_VALUES_FILE_HPP
