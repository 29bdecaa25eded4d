#ifndef CLASSDESC_BIND_HPP
#define CLASSDESC_BIND_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "classdesc/ast.hpp"
#include "classdesc/registry.hpp"
#include "classdesc/value.hpp"

namespace classdesc {

/// Raised by CommandRegistry for unknown paths, bad indices, and
/// unparseable assignment text.
class CommandError : public std::runtime_error {
 public:
  explicit CommandError(const std::string& what) : std::runtime_error(what) {}
};

class CommandRegistry;

namespace detail {
void bind_record(CommandRegistry& cmds, const Registry& reg,
                 const std::string& path, Value& v, const ClassDecl& cls);
void bind_value(CommandRegistry& cmds, const Registry& reg,
                const std::string& path, Value& v, const TypeExpr& type);
}  // namespace detail

/// Scriptable member access over a bound Value: one command per member
/// path. Querying returns decimal text; one trailing argument assigns.
/// Arrays take index arguments. Bound member functions answer "not linked"
/// (there is no interpreter behind them).
class CommandRegistry {
 public:
  struct Entry {
    Value* value = nullptr;     // null for function entries
    TypeExpr type = TypeExpr::named("");
    bool is_function = false;
    FnSignature signature = FnSignature::None;
  };

  bool has(const std::string& path) const { return entries_.count(path) > 0; }

  /// Paths in sorted order; handy for listing commands.
  std::vector<std::string> paths() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

  /// Invoke a command: no args → get, trailing arg → set; arrays take
  /// leading index arguments. Returns the resulting textual value.
  std::string invoke(const std::string& path,
                     const std::vector<std::string>& args = {}) {
    auto it = entries_.find(path);
    if (it == entries_.end())
      throw CommandError("unknown command '" + path + "'");
    Entry& e = it->second;

    if (e.is_function) return "not linked";

    if (e.type.is_array()) return invoke_array(path, e, args);

    PrimitiveKind kind = e.type.primitive_kind();
    if (args.empty()) return primitive_text(kind, e.value->payload());
    if (args.size() == 1) {
      e.value->payload() = parse_primitive_text(kind, args[0]);
      return primitive_text(kind, e.value->payload());
    }
    throw CommandError("command '" + path + "' takes at most one argument");
  }

 private:
  friend void detail::bind_record(CommandRegistry&, const Registry&,
                                  const std::string&, Value&, const ClassDecl&);
  friend void detail::bind_value(CommandRegistry&, const Registry&,
                                 const std::string&, Value&, const TypeExpr&);

  std::string invoke_array(const std::string& path, Entry& e,
                           const std::vector<std::string>& args) {
    // Peel one index per array nesting level.
    Value* v = e.value;
    TypeExpr t = e.type;
    std::size_t consumed = 0;
    while (t.is_array() && consumed < args.size()) {
      std::size_t idx = 0;
      try {
        idx = std::stoull(args[consumed]);
      } catch (const std::exception&) {
        throw CommandError("bad array index '" + args[consumed] + "' for '" +
                           path + "'");
      }
      if (idx >= v->elements().size())
        throw CommandError("index " + std::to_string(idx) + " out of range for '" +
                           path + "' (extent " +
                           std::to_string(v->elements().size()) + ")");
      v = &v->elements()[idx];
      t = t.element();
      ++consumed;
    }

    if (t.is_array()) {
      // Not fully indexed: a bare get flattens to space-separated text.
      if (consumed != args.size())
        throw CommandError("command '" + path + "' needs more indices");
      std::string out;
      flatten(*v, t, out);
      return out;
    }

    PrimitiveKind kind = t.primitive_kind();
    if (consumed == args.size()) return primitive_text(kind, v->payload());
    if (consumed + 1 == args.size()) {
      v->payload() = parse_primitive_text(kind, args[consumed]);
      return primitive_text(kind, v->payload());
    }
    throw CommandError("too many arguments for '" + path + "'");
  }

  static void flatten(const Value& v, const TypeExpr& t, std::string& out) {
    if (t.is_array()) {
      for (const auto& e : v.elements()) {
        flatten(e, t.element(), out);
      }
      return;
    }
    if (!out.empty()) out += ' ';
    out += primitive_text(t.primitive_kind(), v.payload());
  }

  std::map<std::string, Entry> entries_;
};

namespace detail {

inline void bind_value(CommandRegistry& cmds, const Registry& reg,
                       const std::string& path, Value& v, const TypeExpr& type);

inline void bind_record(CommandRegistry& cmds, const Registry& reg,
                        const std::string& path, Value& v, const ClassDecl& cls) {
  std::size_t f = 0;
  // Base members bind under the object's own path, exactly as their bytes
  // pack under the object's own name.
  for (const auto& b : cls.bases) {
    const ClassDecl* base = reg.find_class(b.name);
    if (base && f < v.fields().size())
      bind_record(cmds, reg, path, v.fields()[f], *base);
    ++f;
  }
  for (const auto& m : cls.members) {
    if (m.is_function) {
      if (m.fn_signature != FnSignature::None) {
        CommandRegistry::Entry e;
        e.is_function = true;
        e.signature = m.fn_signature;
        cmds.entries_[path + "." + m.name] = e;
      }
      continue;
    }
    if (!m.serializable) continue;
    if (f < v.fields().size())
      bind_value(cmds, reg, path + "." + m.name, v.fields()[f], m.type);
    ++f;
  }
}

inline void bind_value(CommandRegistry& cmds, const Registry& reg,
                       const std::string& path, Value& v, const TypeExpr& type) {
  TypeExpr t = reg.resolve(type);
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive: {
      CommandRegistry::Entry e;
      e.value = &v;
      e.type = t;
      cmds.entries_[path] = e;
      return;
    }
    case TypeExpr::Variant::Array: {
      // One command for the whole array; elements are reached by index
      // arguments. Arrays of records recurse per element instead.
      const TypeExpr* elem = &t;
      while (elem->is_array()) elem = &elem->element();
      if (elem->is_primitive()) {
        CommandRegistry::Entry e;
        e.value = &v;
        e.type = t;
        cmds.entries_[path] = e;
        return;
      }
      for (std::size_t i = 0; i < v.elements().size(); ++i)
        bind_value(cmds, reg, path + "[" + std::to_string(i) + "]",
                   v.elements()[i], t.element());
      return;
    }
    case TypeExpr::Variant::Pointer: {
      // Present single-object pointers bind through; absent or skipped
      // pointers contribute nothing.
      if (v.is_maybe_pointer() && v.present() && t.has_pointee())
        bind_value(cmds, reg, path, *v.pointee(), t.pointee());
      return;
    }
    case TypeExpr::Variant::Named: {
      const ClassDecl* cls = reg.find_class(t.name());
      if (!cls || cls->kind == ClassKind::Union) return;  // nothing scriptable
      if (v.is_record()) bind_record(cmds, reg, path, v, *cls);
      return;
    }
  }
}

}  // namespace detail

/// Build the command map for one object: `root_name.member` per reachable
/// member, nested records dotted, functions with scriptable signatures
/// included as stubs. The registry holds raw pointers into `root`; keep
/// `root` alive and unmoved while invoking.
inline CommandRegistry bind_members(const Registry& reg,
                                    const std::string& class_name, Value& root,
                                    const std::string& root_name) {
  CommandRegistry cmds;
  const ClassDecl* cls = reg.find_class(class_name);
  if (!cls)
    throw CommandError("unknown class '" + class_name + "'");
  if (!root.is_record() || root.class_name() != class_name)
    throw CommandError("root value does not conform to '" + class_name + "'");
  detail::bind_record(cmds, reg, root_name, root, *cls);
  return cmds;
}

}  // namespace classdesc

#endif  // CLASSDESC_BIND_HPP
