#ifndef CLASSDESC_VALUE_HPP
#define CLASSDESC_VALUE_HPP

#include <charconv>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "classdesc/ast.hpp"
#include "classdesc/registry.hpp"

namespace classdesc {

/// Raised by the runtime for pack/unpack failures: type mismatches, range
/// errors, buffer underruns, cycles, corrupt encodings.
class PackError : public std::runtime_error {
 public:
  explicit PackError(const std::string& what) : std::runtime_error(what) {}
};

/// A typed runtime value: the structure the descriptors descend. Records
/// hold base-class sub-records first, then one value per serializable
/// member, mirroring ClassDecl order.
class Value {
 public:
  enum class Variant {
    Primitive,
    Record,
    Array,
    MaybePointer,
    UnionBlob,
    SkippedPointer,  // placeholder where a generic/member pointer sits
  };

  // Canonical payload per kind: bool for Bool; int64 for signed integers;
  // uint64 for unsigned integers and char; double for floats.
  using Payload = std::variant<bool, std::int64_t, std::uint64_t, double>;

  Value() = default;

  static Value primitive(PrimitiveKind kind, Payload payload) {
    Value v;
    v.variant_ = Variant::Primitive;
    v.kind_ = kind;
    v.payload_ = normalize(kind, payload);
    return v;
  }

  static Value record(std::string class_name, std::vector<Value> fields) {
    Value v;
    v.variant_ = Variant::Record;
    v.name_ = std::move(class_name);
    v.children_ = std::move(fields);
    return v;
  }

  static Value array(std::vector<Value> elements) {
    Value v;
    v.variant_ = Variant::Array;
    v.children_ = std::move(elements);
    return v;
  }

  static Value pointer_absent() {
    Value v;
    v.variant_ = Variant::MaybePointer;
    return v;
  }

  static Value pointer_to(Value pointee) {
    Value v;
    v.variant_ = Variant::MaybePointer;
    v.pointee_ = std::make_shared<Value>(std::move(pointee));
    return v;
  }

  /// Shared form, for building linked structures (and, in tests, cycles).
  static Value pointer_shared(std::shared_ptr<Value> pointee) {
    Value v;
    v.variant_ = Variant::MaybePointer;
    v.pointee_ = std::move(pointee);
    return v;
  }

  static Value union_blob(std::vector<std::uint8_t> bytes) {
    Value v;
    v.variant_ = Variant::UnionBlob;
    v.bytes_ = std::move(bytes);
    return v;
  }

  static Value skipped_pointer() {
    Value v;
    v.variant_ = Variant::SkippedPointer;
    return v;
  }

  Variant variant() const { return variant_; }
  bool is_primitive() const { return variant_ == Variant::Primitive; }
  bool is_record() const { return variant_ == Variant::Record; }
  bool is_array() const { return variant_ == Variant::Array; }
  bool is_maybe_pointer() const { return variant_ == Variant::MaybePointer; }
  bool is_union_blob() const { return variant_ == Variant::UnionBlob; }
  bool is_skipped_pointer() const { return variant_ == Variant::SkippedPointer; }

  PrimitiveKind kind() const { return kind_; }
  const Payload& payload() const { return payload_; }
  Payload& payload() { return payload_; }

  const std::string& class_name() const { return name_; }
  const std::vector<Value>& fields() const { return children_; }
  std::vector<Value>& fields() { return children_; }

  const std::vector<Value>& elements() const { return children_; }
  std::vector<Value>& elements() { return children_; }

  bool present() const { return pointee_ != nullptr; }
  const std::shared_ptr<Value>& pointee() const { return pointee_; }
  std::shared_ptr<Value>& pointee() { return pointee_; }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t>& bytes() { return bytes_; }

  // Deep structural equality. Follows pointers; do not compare values with
  // cyclic pointer structure (packing rejects those anyway).
  friend bool operator==(const Value& a, const Value& b) {
    if (a.variant_ != b.variant_) return false;
    switch (a.variant_) {
      case Variant::Primitive:
        return a.kind_ == b.kind_ && a.payload_ == b.payload_;
      case Variant::Record:
        return a.name_ == b.name_ && a.children_ == b.children_;
      case Variant::Array:
        return a.children_ == b.children_;
      case Variant::MaybePointer:
        if (a.present() != b.present()) return false;
        return !a.present() || *a.pointee_ == *b.pointee_;
      case Variant::UnionBlob:
        return a.bytes_ == b.bytes_;
      case Variant::SkippedPointer:
        return true;
    }
    return false;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

 private:
  // Bring a payload onto the canonical alternative for its kind, when the
  // value is exactly representable there. Out-of-range payloads are kept
  // as-is; encode_primitive reports those.
  static Payload normalize(PrimitiveKind kind, Payload p) {
    if (is_signed_int(kind)) {
      if (auto* u = std::get_if<std::uint64_t>(&p)) {
        if (*u <= static_cast<std::uint64_t>(INT64_MAX))
          return static_cast<std::int64_t>(*u);
      } else if (auto* d = std::get_if<double>(&p)) {
        auto i = static_cast<std::int64_t>(*d);
        if (static_cast<double>(i) == *d) return i;
      }
    } else if (is_unsigned_int(kind)) {
      if (auto* i = std::get_if<std::int64_t>(&p)) {
        if (*i >= 0) return static_cast<std::uint64_t>(*i);
      } else if (auto* d = std::get_if<double>(&p)) {
        if (*d >= 0) {
          auto u = static_cast<std::uint64_t>(*d);
          if (static_cast<double>(u) == *d) return u;
        }
      }
    } else if (is_float(kind)) {
      if (auto* i = std::get_if<std::int64_t>(&p))
        return static_cast<double>(*i);
      if (auto* u = std::get_if<std::uint64_t>(&p))
        return static_cast<double>(*u);
    }
    return p;
  }

  Variant variant_ = Variant::Primitive;
  PrimitiveKind kind_ = PrimitiveKind::SInt32;
  Payload payload_ = std::int64_t{0};
  std::string name_;
  std::vector<Value> children_;         // record fields or array elements
  std::shared_ptr<Value> pointee_;      // maybe-pointer payload
  std::vector<std::uint8_t> bytes_;     // union blob
};

namespace detail {

inline std::size_t union_width(const ClassDecl& cls) {
  std::size_t widest = 0;
  for (const auto& m : cls.members) {
    if (!m.serializable) continue;
    auto w = fixed_width(m.type);
    if (w && *w > widest) widest = *w;
  }
  return widest;
}

}  // namespace detail

/// Build the zero value of a type: numeric zeros, false, absent pointers,
/// zeroed union blobs, recursion through records and arrays. Throws
/// PackError for types no value can be built for.
inline Value default_value(const TypeExpr& type, const Registry& reg) {
  TypeExpr t = reg.resolve(type);
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive: {
      PrimitiveKind k = t.primitive_kind();
      if (k == PrimitiveKind::Bool) return Value::primitive(k, false);
      if (is_float(k)) return Value::primitive(k, 0.0);
      if (is_unsigned_int(k)) return Value::primitive(k, std::uint64_t{0});
      return Value::primitive(k, std::int64_t{0});
    }
    case TypeExpr::Variant::Array: {
      std::vector<Value> elems;
      elems.reserve(t.extent());
      Value proto = default_value(t.element(), reg);
      for (std::size_t i = 0; i < t.extent(); ++i) elems.push_back(proto);
      return Value::array(std::move(elems));
    }
    case TypeExpr::Variant::Pointer: {
      PointerKind k = classify_pointer(t, reg);
      return k == PointerKind::SingleObject ? Value::pointer_absent()
                                            : Value::skipped_pointer();
    }
    case TypeExpr::Variant::Named: {
      const ClassDecl* cls = reg.find_class(t.name());
      if (!cls)
        throw PackError("cannot build a value of undeclared type '" + t.name() + "'");
      if (cls->kind == ClassKind::Union)
        return Value::union_blob(
            std::vector<std::uint8_t>(detail::union_width(*cls), 0));
      std::vector<Value> fields;
      for (const auto& b : cls->bases)
        fields.push_back(default_value(TypeExpr::named(b.name), reg));
      for (const auto& m : cls->members)
        if (m.serializable) fields.push_back(default_value(m.type, reg));
      return Value::record(t.name(), std::move(fields));
    }
  }
  throw PackError("cannot build a value of this type");
}

/// Decimal text of a primitive value: integers in decimal, floats in
/// shortest round-trip form, bool as 0/1, char as its 0..255 code.
inline std::string primitive_text(PrimitiveKind kind, const Value::Payload& p) {
  char buf[64];
  if (kind == PrimitiveKind::Bool)
    return std::get<bool>(p) ? "1" : "0";
  if (is_float(kind)) {
    double d = std::get<double>(p);
    std::to_chars_result r;
    if (kind == PrimitiveKind::Float32)
      r = std::to_chars(buf, buf + sizeof buf, static_cast<float>(d));
    else
      r = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, r.ptr);
  }
  if (is_unsigned_int(kind)) {
    auto r = std::to_chars(buf, buf + sizeof buf, std::get<std::uint64_t>(p));
    return std::string(buf, r.ptr);
  }
  auto r = std::to_chars(buf, buf + sizeof buf, std::get<std::int64_t>(p));
  return std::string(buf, r.ptr);
}

/// Parse the textual form back into a payload. Throws PackError on
/// malformed or out-of-range text.
inline Value::Payload parse_primitive_text(PrimitiveKind kind,
                                           const std::string& text) {
  auto fail = [&]() -> PackError {
    return PackError("cannot parse '" + text + "' as " + primitive_name(kind));
  };
  if (text.empty()) throw fail();
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (kind == PrimitiveKind::Bool) {
    if (text == "0" || text == "false") return false;
    if (text == "1" || text == "true") return true;
    throw fail();
  }
  if (is_float(kind)) {
    if (kind == PrimitiveKind::Float32) {
      float f;
      auto r = std::from_chars(first, last, f);
      if (r.ec != std::errc{} || r.ptr != last) throw fail();
      return static_cast<double>(f);
    }
    double d;
    auto r = std::from_chars(first, last, d);
    if (r.ec != std::errc{} || r.ptr != last) throw fail();
    return d;
  }
  if (is_unsigned_int(kind)) {
    std::uint64_t u;
    auto r = std::from_chars(first, last, u);
    if (r.ec != std::errc{} || r.ptr != last) throw fail();
    return u;
  }
  std::int64_t i;
  auto r = std::from_chars(first, last, i);
  if (r.ec != std::errc{} || r.ptr != last) throw fail();
  return i;
}

}  // namespace classdesc

#endif  // CLASSDESC_VALUE_HPP
