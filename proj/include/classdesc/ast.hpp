#ifndef CLASSDESC_AST_HPP
#define CLASSDESC_AST_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace classdesc {

enum class Access { Public, Private, Protected };

enum class ClassKind { Class, Struct, Union };

// Fixed-width primitive kinds. The canonical width table below is what the
// serialization runtime encodes with; the parser maps builtin type spellings
// (char, unsigned long, ...) onto these kinds.
enum class PrimitiveKind {
  Bool,
  Char,
  SInt8,
  SInt16,
  SInt32,
  SInt64,
  UInt8,
  UInt16,
  UInt32,
  UInt64,
  Float32,
  Float64,
};

enum class PointerKind { Generic, MemberPointer, SingleObject };

inline std::size_t native_width(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Bool:
    case PrimitiveKind::Char:
    case PrimitiveKind::SInt8:
    case PrimitiveKind::UInt8: return 1;
    case PrimitiveKind::SInt16:
    case PrimitiveKind::UInt16: return 2;
    case PrimitiveKind::SInt32:
    case PrimitiveKind::UInt32:
    case PrimitiveKind::Float32: return 4;
    case PrimitiveKind::SInt64:
    case PrimitiveKind::UInt64:
    case PrimitiveKind::Float64: return 8;
  }
  return 0;
}

inline const char* primitive_name(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Bool: return "bool";
    case PrimitiveKind::Char: return "char";
    case PrimitiveKind::SInt8: return "signed-int-8";
    case PrimitiveKind::SInt16: return "signed-int-16";
    case PrimitiveKind::SInt32: return "signed-int-32";
    case PrimitiveKind::SInt64: return "signed-int-64";
    case PrimitiveKind::UInt8: return "unsigned-int-8";
    case PrimitiveKind::UInt16: return "unsigned-int-16";
    case PrimitiveKind::UInt32: return "unsigned-int-32";
    case PrimitiveKind::UInt64: return "unsigned-int-64";
    case PrimitiveKind::Float32: return "float-32";
    case PrimitiveKind::Float64: return "float-64";
  }
  return "?";
}

inline std::optional<PrimitiveKind> primitive_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(PrimitiveKind::Float64); ++i) {
    auto k = static_cast<PrimitiveKind>(i);
    if (s == primitive_name(k)) return k;
  }
  return std::nullopt;
}

inline bool is_signed_int(PrimitiveKind k) {
  return k == PrimitiveKind::SInt8 || k == PrimitiveKind::SInt16 ||
         k == PrimitiveKind::SInt32 || k == PrimitiveKind::SInt64;
}

inline bool is_unsigned_int(PrimitiveKind k) {
  return k == PrimitiveKind::Char || k == PrimitiveKind::UInt8 ||
         k == PrimitiveKind::UInt16 || k == PrimitiveKind::UInt32 ||
         k == PrimitiveKind::UInt64;
}

inline bool is_float(PrimitiveKind k) {
  return k == PrimitiveKind::Float32 || k == PrimitiveKind::Float64;
}

/// A type as it appears in a declaration: a primitive, a named type, a
/// fixed-extent array, or a pointer. Immutable; children are shared so
/// copies are cheap.
class TypeExpr {
 public:
  enum class Variant { Primitive, Named, Array, Pointer };

  static TypeExpr primitive(PrimitiveKind k) {
    TypeExpr t;
    t.variant_ = Variant::Primitive;
    t.prim_ = k;
    return t;
  }

  static TypeExpr named(std::string name) {
    TypeExpr t;
    t.variant_ = Variant::Named;
    t.name_ = std::move(name);
    return t;
  }

  static TypeExpr array(TypeExpr element, std::size_t extent) {
    TypeExpr t;
    t.variant_ = Variant::Array;
    t.child_ = std::make_shared<const TypeExpr>(std::move(element));
    t.extent_ = extent;
    return t;
  }

  /// pointee may be empty when the pointee is unknowable (function-pointer
  /// typedefs and the like); such pointers are always Generic.
  static TypeExpr pointer(std::optional<TypeExpr> pointee, PointerKind kind) {
    TypeExpr t;
    t.variant_ = Variant::Pointer;
    if (pointee) t.child_ = std::make_shared<const TypeExpr>(std::move(*pointee));
    t.pkind_ = kind;
    return t;
  }

  Variant variant() const { return variant_; }
  bool is_primitive() const { return variant_ == Variant::Primitive; }
  bool is_named() const { return variant_ == Variant::Named; }
  bool is_array() const { return variant_ == Variant::Array; }
  bool is_pointer() const { return variant_ == Variant::Pointer; }

  PrimitiveKind primitive_kind() const { return prim_; }
  const std::string& name() const { return name_; }
  const TypeExpr& element() const { return *child_; }
  std::size_t extent() const { return extent_; }
  bool has_pointee() const { return variant_ == Variant::Pointer && child_ != nullptr; }
  const TypeExpr& pointee() const { return *child_; }
  PointerKind pointer_kind() const { return pkind_; }

  friend bool operator==(const TypeExpr& a, const TypeExpr& b) {
    if (a.variant_ != b.variant_) return false;
    switch (a.variant_) {
      case Variant::Primitive: return a.prim_ == b.prim_;
      case Variant::Named: return a.name_ == b.name_;
      case Variant::Array:
        return a.extent_ == b.extent_ && *a.child_ == *b.child_;
      case Variant::Pointer:
        if (a.pkind_ != b.pkind_) return false;
        if ((a.child_ == nullptr) != (b.child_ == nullptr)) return false;
        return a.child_ == nullptr || *a.child_ == *b.child_;
    }
    return false;
  }
  friend bool operator!=(const TypeExpr& a, const TypeExpr& b) { return !(a == b); }

 private:
  Variant variant_ = Variant::Named;
  PrimitiveKind prim_ = PrimitiveKind::SInt32;
  std::string name_;
  std::shared_ptr<const TypeExpr> child_;  // array element or pointee
  std::size_t extent_ = 0;
  PointerKind pkind_ = PointerKind::Generic;
};

/// Fixed byte size of a type, when it has one: primitives per the width
/// table, arrays by multiplication. Classes, pointers and unknown names
/// have none.
inline std::optional<std::size_t> fixed_width(const TypeExpr& t) {
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive:
      return native_width(t.primitive_kind());
    case TypeExpr::Variant::Array: {
      auto e = fixed_width(t.element());
      if (!e) return std::nullopt;
      return *e * t.extent();
    }
    default:
      return std::nullopt;
  }
}

/// Render a TypeExpr the way it would be spelled in source; used in
/// diagnostics and the IR dump.
inline std::string type_to_string(const TypeExpr& t) {
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive: return primitive_name(t.primitive_kind());
    case TypeExpr::Variant::Named: return t.name();
    case TypeExpr::Variant::Array:
      return type_to_string(t.element()) + "[" + std::to_string(t.extent()) + "]";
    case TypeExpr::Variant::Pointer: {
      std::string p = t.has_pointee() ? type_to_string(t.pointee()) : "?";
      p += t.pointer_kind() == PointerKind::MemberPointer ? "::*" : "*";
      return p;
    }
  }
  return "?";
}

struct TemplateParam {
  std::string kind_text;  // "class", "typename", "int", ...
  std::string name;

  friend bool operator==(const TemplateParam&, const TemplateParam&) = default;
};

struct BaseSpec {
  std::string name;
  Access access = Access::Private;

  friend bool operator==(const BaseSpec&, const BaseSpec&) = default;
};

// Member functions are only interesting to the binding action, and then only
// when their parameter list is empty or the (int argc, char* argv[]) shape.
enum class FnSignature { None, NoArgs, ArgcArgv };

struct Member {
  std::string name;
  TypeExpr type = TypeExpr::named("");
  Access access = Access::Public;
  bool serializable = true;
  bool is_function = false;
  FnSignature fn_signature = FnSignature::None;
  bool is_static = false;

  friend bool operator==(const Member&, const Member&) = default;
};

struct ClassDecl {
  std::string name;  // qualified for nested classes ("Outer::Inner")
  ClassKind kind = ClassKind::Class;
  std::vector<TemplateParam> template_params;
  std::vector<BaseSpec> bases;
  std::vector<Member> members;
  bool has_private_or_protected = false;

  bool is_template() const { return !template_params.empty(); }

  Access default_access() const {
    return kind == ClassKind::Class ? Access::Private : Access::Public;
  }

  std::size_t serializable_member_count() const {
    std::size_t n = 0;
    for (const auto& m : members)
      if (m.serializable) ++n;
    return n;
  }

  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct TypedefDecl {
  std::string name;
  TypeExpr type = TypeExpr::named("");

  friend bool operator==(const TypedefDecl&, const TypedefDecl&) = default;
};

struct OmitPragma {
  std::string action;  // "ALL" when the pragma names no action
  std::string type_name;

  friend bool operator==(const OmitPragma&, const OmitPragma&) = default;
};

struct SingleObjPragma {
  std::string type_name;

  friend bool operator==(const SingleObjPragma&, const SingleObjPragma&) = default;
};

struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// One top-level declaration as recognized by the parser, before any
/// cross-declaration resolution.
struct RawDecl {
  enum class Variant { Class, Typedef, Omit, SingleObj };

  Variant variant = Variant::Class;
  ClassDecl class_decl;
  TypedefDecl typedef_decl;
  OmitPragma omit;
  SingleObjPragma single_obj;
  SourcePos begin;
  SourcePos end;

  static RawDecl make_class(ClassDecl c, SourcePos b, SourcePos e) {
    RawDecl d;
    d.variant = Variant::Class;
    d.class_decl = std::move(c);
    d.begin = b;
    d.end = e;
    return d;
  }
  static RawDecl make_typedef(TypedefDecl t, SourcePos b, SourcePos e) {
    RawDecl d;
    d.variant = Variant::Typedef;
    d.typedef_decl = std::move(t);
    d.begin = b;
    d.end = e;
    return d;
  }
  static RawDecl make_omit(OmitPragma o, SourcePos p) {
    RawDecl d;
    d.variant = Variant::Omit;
    d.omit = std::move(o);
    d.begin = d.end = p;
    return d;
  }
  static RawDecl make_single_obj(SingleObjPragma s, SourcePos p) {
    RawDecl d;
    d.variant = Variant::SingleObj;
    d.single_obj = std::move(s);
    d.begin = d.end = p;
    return d;
  }
};

inline const char* access_name(Access a) {
  switch (a) {
    case Access::Public: return "public";
    case Access::Private: return "private";
    case Access::Protected: return "protected";
  }
  return "?";
}

inline const char* class_kind_name(ClassKind k) {
  switch (k) {
    case ClassKind::Class: return "class";
    case ClassKind::Struct: return "struct";
    case ClassKind::Union: return "union";
  }
  return "?";
}

inline const char* fn_signature_name(FnSignature s) {
  switch (s) {
    case FnSignature::None: return "none";
    case FnSignature::NoArgs: return "no-args";
    case FnSignature::ArgcArgv: return "argc-argv";
  }
  return "?";
}

}  // namespace classdesc

#endif  // CLASSDESC_AST_HPP
