#pragma once

#include "affdim/carpets.hpp"
#include "affdim/estimators.hpp"
#include "affdim/geometry.hpp"
#include "affdim/ifs.hpp"
#include "affdim/projective.hpp"
#include "affdim/thermo.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace affdim {

using Json = nlohmann::ordered_json;

/// Parses a file; malformed JSON raises InvalidInput.
Json load_json(const std::string& path);

/// {"maps":[{a,b,c,d,tx,ty}], "ball":{cx,cy,r}}, ball optional.
Ifs ifs_from_json(const Json& j);
Json to_json(const Ifs& ifs);

/// {"p":..,"q":..,"digits":[[j,k],...]}
CarpetSpec carpet_from_json(const Json& j);
Json to_json(const CarpetSpec& spec);

/// Accepts either schema.
bool is_carpet_json(const Json& j);

Json to_json(const AffinityDimension& a);
Json to_json(const CoverReport& c);
Json to_json(const TwoScaleReport& r);
Json to_json(const SscReport& r);
Json to_json(const PoscReport& r, std::size_t alphabet);
Json to_json(const DirectionsApprox& d);
Json to_json(const Multicone& c);
Json to_json(const DominationReport& r);
Json to_json(const IrreducibilityClass& c, std::size_t alphabet);
Json to_json(const BochiMorrisReport& r);
Json to_json(const TangentScan& t);
Json to_json(const ContentConsistency& c, std::size_t alphabet);
Json to_json(const EqState& eq);
Json to_json(const GibbsWeights& g, std::size_t alphabet);

/// One "x,y" line per point, 17 significant digits.
void write_csv(const PointCloud& cloud, std::ostream& out);
/// Little-endian f64 pairs.
void write_binary(const PointCloud& cloud, std::ostream& out);

} // namespace affdim
