#ifndef CLASSDESC_PACK_HPP
#define CLASSDESC_PACK_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "classdesc/ast.hpp"
#include "classdesc/registry.hpp"
#include "classdesc/value.hpp"

namespace classdesc {

enum class Mode { Native, Xdr };

inline const char* mode_name(Mode m) {
  return m == Mode::Native ? "native" : "xdr";
}

/// The byte repository descriptors write into and read from. Appending
/// never moves the read cursor; reading never writes.
struct PackBuffer {
  Mode mode = Mode::Native;
  std::vector<std::uint8_t> bytes;
  std::size_t read_cursor = 0;
  std::vector<std::string> warnings;

  // When set, pack records each qualified name it visits, in order. Used
  // to check that both modes walk the same structure.
  std::vector<std::string>* visit_trace = nullptr;

  explicit PackBuffer(Mode m = Mode::Native) : mode(m) {}

  void append(const std::uint8_t* data, std::size_t n) {
    bytes.insert(bytes.end(), data, data + n);
  }
  void append(const std::vector<std::uint8_t>& data) {
    bytes.insert(bytes.end(), data.begin(), data.end());
  }

  std::size_t remaining() const { return bytes.size() - read_cursor; }

  /// Read n bytes from the cursor; the qualified name feeds the underrun
  /// message.
  const std::uint8_t* read(std::size_t n, const std::string& name) {
    if (remaining() < n)
      throw PackError("buffer underrun while unpacking '" + name + "': need " +
                      std::to_string(n) + " bytes, have " +
                      std::to_string(remaining()));
    const std::uint8_t* p = bytes.data() + read_cursor;
    read_cursor += n;
    return p;
  }
};

namespace detail {

// Serialized width of one primitive. Native mode uses the width table
// as-is; XDR widens sub-4-byte integers (and bool) to the 4-byte quantum.
inline std::size_t encoded_width(PrimitiveKind k, Mode mode) {
  std::size_t w = native_width(k);
  if (mode == Mode::Xdr && w < 4) return 4;
  return w;
}

inline void put_be(std::uint64_t v, std::size_t width, std::vector<std::uint8_t>& out) {
  for (std::size_t i = 0; i < width; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * (width - 1 - i))));
}

inline void put_le(std::uint64_t v, std::size_t width, std::vector<std::uint8_t>& out) {
  for (std::size_t i = 0; i < width; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t get_be(const std::uint8_t* p, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 8) | p[i];
  return v;
}

inline std::uint64_t get_le(const std::uint8_t* p, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i)
    v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

inline void range_error(PrimitiveKind k, const std::string& shown) {
  throw PackError("value " + shown + " out of range for " + primitive_name(k));
}

}  // namespace detail

/// Encode one primitive. A pure function of (kind, payload, mode): native
/// mode is little-endian at the width table's sizes; XDR mode is RFC 4506
/// (big-endian, 4-byte quantum, IEEE 754 floats).
inline std::vector<std::uint8_t> encode_primitive(PrimitiveKind kind,
                                                  const Value::Payload& payload,
                                                  Mode mode) {
  std::vector<std::uint8_t> out;
  const std::size_t width = detail::encoded_width(kind, mode);

  if (kind == PrimitiveKind::Bool) {
    if (!std::holds_alternative<bool>(payload))
      throw PackError("boolean payload required for bool");
    std::uint64_t v = std::get<bool>(payload) ? 1 : 0;
    mode == Mode::Xdr ? detail::put_be(v, width, out)
                      : detail::put_le(v, width, out);
    return out;
  }

  if (is_float(kind)) {
    if (!std::holds_alternative<double>(payload))
      throw PackError(std::string("numeric payload required for ") +
                      primitive_name(kind));
    double d = std::get<double>(payload);
    if (kind == PrimitiveKind::Float32) {
      float f = static_cast<float>(d);
      if (std::isfinite(d) && !std::isfinite(f))
        detail::range_error(kind, std::to_string(d));
      std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
      mode == Mode::Xdr ? detail::put_be(bits, 4, out) : detail::put_le(bits, 4, out);
    } else {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
      mode == Mode::Xdr ? detail::put_be(bits, 8, out) : detail::put_le(bits, 8, out);
    }
    return out;
  }

  if (is_signed_int(kind)) {
    if (!std::holds_alternative<std::int64_t>(payload))
      throw PackError(std::string("integer payload required for ") +
                      primitive_name(kind));
    std::int64_t v = std::get<std::int64_t>(payload);
    std::size_t logical = native_width(kind);
    if (logical < 8) {
      std::int64_t lo = -(std::int64_t{1} << (8 * logical - 1));
      std::int64_t hi = (std::int64_t{1} << (8 * logical - 1)) - 1;
      if (v < lo || v > hi) detail::range_error(kind, std::to_string(v));
    }
    // Two's complement bits; sign extension falls out of the cast.
    std::uint64_t bits = static_cast<std::uint64_t>(v);
    mode == Mode::Xdr ? detail::put_be(bits, width, out)
                      : detail::put_le(bits, width, out);
    return out;
  }

  // Unsigned integers, char included (char is 0..255 on the wire).
  if (!std::holds_alternative<std::uint64_t>(payload))
    throw PackError(std::string("unsigned integer payload required for ") +
                    primitive_name(kind));
  std::uint64_t v = std::get<std::uint64_t>(payload);
  std::size_t logical = native_width(kind);
  if (logical < 8) {
    std::uint64_t hi = (std::uint64_t{1} << (8 * logical)) - 1;
    if (v > hi) detail::range_error(kind, std::to_string(v));
  }
  mode == Mode::Xdr ? detail::put_be(v, width, out) : detail::put_le(v, width, out);
  return out;
}

/// Decode one primitive from the buffer's cursor, advancing it. Inverse of
/// encode_primitive for in-range values.
inline Value decode_primitive(PackBuffer& buf, PrimitiveKind kind,
                              const std::string& name) {
  const std::size_t width = detail::encoded_width(kind, buf.mode);
  const std::uint8_t* p = buf.read(width, name);
  const bool be = buf.mode == Mode::Xdr;
  std::uint64_t raw = be ? detail::get_be(p, width) : detail::get_le(p, width);

  if (kind == PrimitiveKind::Bool) {
    if (raw > 1)
      throw PackError("corrupt boolean encoding at '" + name + "'");
    return Value::primitive(kind, raw == 1);
  }
  if (kind == PrimitiveKind::Float32) {
    float f = std::bit_cast<float>(static_cast<std::uint32_t>(raw));
    return Value::primitive(kind, static_cast<double>(f));
  }
  if (kind == PrimitiveKind::Float64)
    return Value::primitive(kind, std::bit_cast<double>(raw));

  if (is_signed_int(kind)) {
    // Sign-extend from the encoded width.
    std::size_t bits = 8 * width;
    std::int64_t v;
    if (bits < 64) {
      std::uint64_t sign = std::uint64_t{1} << (bits - 1);
      v = static_cast<std::int64_t>((raw ^ sign)) - static_cast<std::int64_t>(sign);
    } else {
      v = static_cast<std::int64_t>(raw);
    }
    std::size_t logical = native_width(kind);
    if (logical < 8) {
      std::int64_t lo = -(std::int64_t{1} << (8 * logical - 1));
      std::int64_t hi = (std::int64_t{1} << (8 * logical - 1)) - 1;
      if (v < lo || v > hi)
        throw PackError("corrupt " + std::string(primitive_name(kind)) +
                        " encoding at '" + name + "'");
    }
    return Value::primitive(kind, v);
  }

  std::size_t logical = native_width(kind);
  if (logical < 8) {
    std::uint64_t hi = (std::uint64_t{1} << (8 * logical)) - 1;
    if (raw > hi)
      throw PackError("corrupt " + std::string(primitive_name(kind)) +
                      " encoding at '" + name + "'");
  }
  return Value::primitive(kind, raw);
}

namespace detail {

// Path of single-object pointees currently being descended; revisiting one
// means the structure is cyclic. Identity is the pointee's address, which
// is stable because pointees live behind shared_ptr.
using VisitPath = std::set<const Value*>;

inline void pack_impl(PackBuffer& buf, const std::string& name, const Value& v,
                      const TypeExpr& type, const Registry& reg, VisitPath& path);

inline void mismatch(const std::string& name, const TypeExpr& type, const Value& v) {
  const char* got = "value";
  switch (v.variant()) {
    case Value::Variant::Primitive: got = "primitive"; break;
    case Value::Variant::Record: got = "record"; break;
    case Value::Variant::Array: got = "array"; break;
    case Value::Variant::MaybePointer: got = "maybe-pointer"; break;
    case Value::Variant::UnionBlob: got = "union-blob"; break;
    case Value::Variant::SkippedPointer: got = "skipped-pointer"; break;
  }
  throw PackError("value/type mismatch at '" + name + "': type " +
                  type_to_string(type) + " vs " + got + " value");
}

inline void pack_record(PackBuffer& buf, const std::string& name, const Value& v,
                        const ClassDecl& cls, const Registry& reg, VisitPath& path) {
  if (cls.kind == ClassKind::Union) {
    if (!v.is_union_blob()) mismatch(name, TypeExpr::named(cls.name), v);
    if (buf.mode == Mode::Xdr)
      throw PackError("union '" + cls.name +
                      "' cannot be packed in xdr mode (no portable layout)");
    std::size_t want = union_width(cls);
    if (v.bytes().size() != want)
      throw PackError("union blob at '" + name + "' has " +
                      std::to_string(v.bytes().size()) + " bytes, expected " +
                      std::to_string(want));
    buf.append(v.bytes());
    return;
  }

  if (!v.is_record() || v.class_name() != cls.name)
    mismatch(name, TypeExpr::named(cls.name), v);
  std::size_t want = cls.bases.size() + cls.serializable_member_count();
  if (v.fields().size() != want)
    throw PackError("record at '" + name + "' has " +
                    std::to_string(v.fields().size()) + " fields, expected " +
                    std::to_string(want) + " for '" + cls.name + "'");

  std::size_t f = 0;
  // Bases first, with the name unchanged: a base's members are the
  // object's own members as far as paths are concerned.
  for (const auto& b : cls.bases)
    pack_impl(buf, name, v.fields()[f++], TypeExpr::named(b.name), reg, path);
  for (const auto& m : cls.members) {
    if (!m.serializable) continue;
    pack_impl(buf, name + "." + m.name, v.fields()[f++], m.type, reg, path);
  }
}

inline void pack_impl(PackBuffer& buf, const std::string& name, const Value& v,
                      const TypeExpr& type, const Registry& reg, VisitPath& path) {
  if (buf.visit_trace) buf.visit_trace->push_back(name);
  TypeExpr t = reg.resolve(type);

  switch (t.variant()) {
    case TypeExpr::Variant::Primitive: {
      if (!v.is_primitive() || v.kind() != t.primitive_kind()) mismatch(name, t, v);
      buf.append(encode_primitive(t.primitive_kind(), v.payload(), buf.mode));
      return;
    }
    case TypeExpr::Variant::Array: {
      if (!v.is_array()) mismatch(name, t, v);
      if (v.elements().size() != t.extent())
        throw PackError("array at '" + name + "' has " +
                        std::to_string(v.elements().size()) +
                        " elements, declared extent is " + std::to_string(t.extent()));
      for (std::size_t i = 0; i < v.elements().size(); ++i)
        pack_impl(buf, name + "[" + std::to_string(i) + "]", v.elements()[i],
                  t.element(), reg, path);
      return;
    }
    case TypeExpr::Variant::Pointer: {
      PointerKind k = classify_pointer(t, reg);
      if (k == PointerKind::SingleObject) {
        if (!v.is_maybe_pointer()) mismatch(name, t, v);
        std::uint8_t flag = v.present() ? 1 : 0;
        buf.append(&flag, 1);
        if (v.present()) {
          const Value* id = v.pointee().get();
          if (!path.insert(id).second)
            throw PackError("cyclic structure at '" + name +
                            "': pointee already on the pack path");
          pack_impl(buf, name, *v.pointee(), t.pointee(), reg, path);
          path.erase(id);
        }
        return;
      }
      if (!v.is_skipped_pointer()) mismatch(name, t, v);
      buf.warnings.push_back(
          (k == PointerKind::MemberPointer ? "skipping member pointer "
                                           : "skipping generic pointer ") +
          name);
      return;
    }
    case TypeExpr::Variant::Named: {
      const ClassDecl* cls = reg.find_class(t.name());
      if (!cls)
        throw PackError("cannot pack '" + name + "': type '" + t.name() +
                        "' is not declared");
      pack_record(buf, name, v, *cls, reg, path);
      return;
    }
  }
}

inline Value unpack_impl(PackBuffer& buf, const std::string& name,
                         const TypeExpr& type, const Registry& reg) {
  TypeExpr t = reg.resolve(type);
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive:
      return decode_primitive(buf, t.primitive_kind(), name);
    case TypeExpr::Variant::Array: {
      std::vector<Value> elems;
      elems.reserve(t.extent());
      for (std::size_t i = 0; i < t.extent(); ++i)
        elems.push_back(unpack_impl(buf, name + "[" + std::to_string(i) + "]",
                                    t.element(), reg));
      return Value::array(std::move(elems));
    }
    case TypeExpr::Variant::Pointer: {
      PointerKind k = classify_pointer(t, reg);
      if (k != PointerKind::SingleObject) return Value::skipped_pointer();
      const std::uint8_t* p = buf.read(1, name);
      if (*p == 0) return Value::pointer_absent();
      if (*p != 1)
        throw PackError("corrupt single-object pointer flag at '" + name +
                        "': byte " + std::to_string(*p));
      return Value::pointer_to(unpack_impl(buf, name, t.pointee(), reg));
    }
    case TypeExpr::Variant::Named: {
      const ClassDecl* cls = reg.find_class(t.name());
      if (!cls)
        throw PackError("cannot unpack '" + name + "': type '" + t.name() +
                        "' is not declared");
      if (cls->kind == ClassKind::Union) {
        if (buf.mode == Mode::Xdr)
          throw PackError("union '" + cls->name +
                          "' cannot be unpacked in xdr mode (no portable layout)");
        std::size_t w = union_width(*cls);
        const std::uint8_t* p = buf.read(w, name);
        return Value::union_blob(std::vector<std::uint8_t>(p, p + w));
      }
      std::vector<Value> fields;
      for (const auto& b : cls->bases)
        fields.push_back(unpack_impl(buf, name, TypeExpr::named(b.name), reg));
      for (const auto& m : cls->members) {
        if (!m.serializable) continue;
        fields.push_back(unpack_impl(buf, name + "." + m.name, m.type, reg));
      }
      return Value::record(cls->name, std::move(fields));
    }
  }
  throw PackError("cannot unpack '" + name + "'");
}

}  // namespace detail

/// Recursively pack `value` (of `type`) into the buffer. Bases first, then
/// members in declaration order; names extend by ".member" and feed
/// warnings and trace output, never the encoded bytes.
inline void pack(PackBuffer& buf, const std::string& name, const Value& value,
                 const TypeExpr& type, const Registry& reg) {
  detail::VisitPath path;
  detail::pack_impl(buf, name, value, type, reg, path);
}

/// Inverse of pack: reads from the buffer's cursor and rebuilds the Value.
/// Generic/member pointer positions yield skipped-pointer markers and
/// consume no bytes.
inline Value unpack(PackBuffer& buf, const std::string& name,
                    const TypeExpr& type, const Registry& reg) {
  return detail::unpack_impl(buf, name, type, reg);
}

/// Pack a sequence of values as the stream operator would: each with an
/// empty name, in order.
inline PackBuffer& stream_pack(
    PackBuffer& buf, const std::vector<std::pair<Value, TypeExpr>>& values,
    const Registry& reg) {
  for (const auto& [v, t] : values) pack(buf, "", v, t, reg);
  return buf;
}

/// Stream-style sugar: `Packer(buf, reg) << typed(v1, t1) << typed(v2, t2)`.
struct TypedRef {
  const Value& value;
  const TypeExpr& type;
};

inline TypedRef typed(const Value& v, const TypeExpr& t) { return TypedRef{v, t}; }

class Packer {
 public:
  Packer(PackBuffer& buf, const Registry& reg) : buf_(buf), reg_(reg) {}
  Packer& operator<<(const TypedRef& tv) {
    pack(buf_, "", tv.value, tv.type, reg_);
    return *this;
  }

 private:
  PackBuffer& buf_;
  const Registry& reg_;
};

}  // namespace classdesc

#endif  // CLASSDESC_PACK_HPP
