#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ulef/fixpoint.hpp"
#include "ulef/vectorfield.hpp"

namespace ulef {

json read_json(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string dump(const json& doc);

/// A named fixture ("tetrahedron", "octahedron", "klein-bottle", "genus-2",
/// "seven-vertex-torus", "cyclic-torus", "sine-torus", "square-torus") or an
/// inline complex document. Named fixtures may be given as {"fixture": name,
/// ...} with "m" and "offset" for square tori.
QuotientComplex resolve_quotient(const json& spec);
/// Tori with Euclidean cover, for analytic models.
Torus resolve_torus(const json& spec);

/// Weights as [[deck word, vertex, "p/q"], ...].
CoverPoint cover_point_from_json(const MarkedGroup& g, const json& doc);
json cover_point_to_json(const MarkedGroup& g, const CoverPoint& p);
RationalVector rational_vector_from_json(const json& doc);

/// A map document resolved to a model, or to index data supplied directly.
struct MapDocument {
  std::optional<SelfMapModel> model;
  std::optional<IndexData> index_data;
  std::string kind;
};
/// `subdivide` overrides the document's subdivision count, `grid` its Newton
/// grid.
MapDocument parse_map_document(const json& doc, std::optional<int> subdivide = {}, std::optional<int> grid = {});

struct FieldDocument {
  std::optional<VectorFieldModel> model;
  std::optional<IndexData> index_data;
  std::optional<int> euler_characteristic;  // index data only
  std::string kind;
};
FieldDocument parse_field_document(const json& doc, std::optional<int> subdivide = {}, std::optional<int> grid = {});

}  // namespace ulef
