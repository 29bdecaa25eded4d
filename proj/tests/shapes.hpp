#ifndef CLASSDESC_TESTS_SHAPES_HPP
#define CLASSDESC_TESTS_SHAPES_HPP

// Random class-shape generator backing the serialization round-trip
// property: nested records (depth <= 4), <= 8 members each, array extents
// <= 16, optional single-object pointers, no unions, no generic pointers.

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "classdesc/registry.hpp"
#include "classdesc/value.hpp"

namespace testsupport {

struct ShapeCase {
  classdesc::Registry registry;
  std::string root;
  classdesc::Value value;
};

namespace shapedetail {

using namespace classdesc;

inline PrimitiveKind random_primitive(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 11);
  return static_cast<PrimitiveKind>(pick(rng));
}

inline Value::Payload random_payload(PrimitiveKind k, std::mt19937& rng) {
  switch (k) {
    case PrimitiveKind::Bool:
      return std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    case PrimitiveKind::Char:
    case PrimitiveKind::UInt8:
      return std::uint64_t(std::uniform_int_distribution<std::uint32_t>(0, 255)(rng));
    case PrimitiveKind::UInt16:
      return std::uint64_t(
          std::uniform_int_distribution<std::uint32_t>(0, 65535)(rng));
    case PrimitiveKind::UInt32:
      return std::uint64_t(std::uniform_int_distribution<std::uint32_t>()(rng));
    case PrimitiveKind::UInt64:
      return std::uniform_int_distribution<std::uint64_t>()(rng);
    case PrimitiveKind::SInt8:
      return std::int64_t(std::uniform_int_distribution<int>(-128, 127)(rng));
    case PrimitiveKind::SInt16:
      return std::int64_t(
          std::uniform_int_distribution<int>(-32768, 32767)(rng));
    case PrimitiveKind::SInt32:
      return std::int64_t(std::uniform_int_distribution<std::int32_t>(
          INT32_MIN, INT32_MAX)(rng));
    case PrimitiveKind::SInt64:
      return std::uniform_int_distribution<std::int64_t>()(rng);
    case PrimitiveKind::Float32:
      for (;;) {
        auto bits = std::uniform_int_distribution<std::uint32_t>()(rng);
        float f = std::bit_cast<float>(bits);
        if (std::isfinite(f)) return double(f);
      }
    case PrimitiveKind::Float64:
      for (;;) {
        auto bits = std::uniform_int_distribution<std::uint64_t>()(rng);
        double d = std::bit_cast<double>(bits);
        if (std::isfinite(d)) return d;
      }
  }
  return std::int64_t{0};
}

// Builds the class pool for one shape; classes reference only classes
// created by their own recursive calls, so the reference graph is a tree.
struct Builder {
  std::mt19937& rng;
  std::vector<ClassDecl> classes;
  std::vector<std::string> single_obj;
  int serial = 0;

  explicit Builder(std::mt19937& r) : rng(r) {}

  int roll(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  }

  std::string make_class(int depth) {
    ClassDecl cls;
    cls.name = "c" + std::to_string(serial++);
    cls.kind = ClassKind::Struct;

    if (depth < 4 && roll(0, 4) == 0)
      cls.bases.push_back(BaseSpec{make_class(depth + 1), Access::Public});

    int member_count = roll(0, 8);
    for (int i = 0; i < member_count; ++i) {
      Member m;
      m.name = "m" + std::to_string(i);
      m.access = Access::Public;
      m.serializable = true;
      int choice = roll(0, 9);
      if (choice < 5 || depth >= 4) {
        m.type = TypeExpr::primitive(random_primitive(rng));
      } else if (choice < 7) {
        m.type = TypeExpr::array(TypeExpr::primitive(random_primitive(rng)),
                                 std::size_t(roll(1, 16)));
      } else if (choice == 7) {
        m.type = TypeExpr::named(make_class(depth + 1));
      } else if (choice == 8) {
        std::string pointee = make_class(depth + 1);
        single_obj.push_back(pointee);
        m.type = TypeExpr::pointer(TypeExpr::named(pointee),
                                   PointerKind::Generic);
      } else {
        m.type = TypeExpr::array(TypeExpr::named(make_class(depth + 1)),
                                 std::size_t(roll(1, 4)));
      }
      cls.members.push_back(std::move(m));
    }
    classes.push_back(std::move(cls));
    return classes.back().name;
  }
};

inline Value random_value(const TypeExpr& type, const Registry& reg,
                          std::mt19937& rng) {
  TypeExpr t = reg.resolve(type);
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive:
      return Value::primitive(t.primitive_kind(),
                              random_payload(t.primitive_kind(), rng));
    case TypeExpr::Variant::Array: {
      std::vector<Value> elems;
      for (std::size_t i = 0; i < t.extent(); ++i)
        elems.push_back(random_value(t.element(), reg, rng));
      return Value::array(std::move(elems));
    }
    case TypeExpr::Variant::Pointer: {
      if (classify_pointer(t, reg) == PointerKind::SingleObject &&
          std::uniform_int_distribution<int>(0, 1)(rng) == 1)
        return Value::pointer_to(random_value(t.pointee(), reg, rng));
      return classify_pointer(t, reg) == PointerKind::SingleObject
                 ? Value::pointer_absent()
                 : Value::skipped_pointer();
    }
    case TypeExpr::Variant::Named: {
      const ClassDecl* cls = reg.find_class(t.name());
      std::vector<Value> fields;
      for (const auto& b : cls->bases)
        fields.push_back(random_value(TypeExpr::named(b.name), reg, rng));
      for (const auto& m : cls->members)
        if (m.serializable) fields.push_back(random_value(m.type, reg, rng));
      return Value::record(t.name(), std::move(fields));
    }
  }
  return Value();
}

}  // namespace shapedetail

inline ShapeCase random_shape(std::mt19937& rng) {
  shapedetail::Builder b(rng);
  std::string root = b.make_class(1);

  std::vector<classdesc::RawDecl> decls;
  for (auto& c : b.classes)
    decls.push_back(classdesc::RawDecl::make_class(std::move(c), {}, {}));
  classdesc::Diagnostics diags;
  ShapeCase out;
  out.registry = classdesc::build_registry(decls, diags);
  for (const auto& n : b.single_obj) out.registry.mark_single_object(n);
  out.root = root;
  out.value =
      shapedetail::random_value(classdesc::TypeExpr::named(root), out.registry, rng);
  return out;
}

}  // namespace testsupport

#endif  // CLASSDESC_TESTS_SHAPES_HPP
