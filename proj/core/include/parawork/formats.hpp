#pragma once

#include <filesystem>
#include <iosfwd>

#include "parawork/ffield.hpp"
#include "parawork/pgeom.hpp"
#include "parawork/progressions.hpp"

namespace parawork {

/// Point sets of F_q^2 as '0'/'1' characters in index order x * q + y,
/// written as q lines of q characters. Whitespace and '#' comment lines are
/// ignored on input. Throws BadFormat on any other character or a count
/// other than q^2.
PointSet2 read_bits(const FieldCtx& ctx, std::istream& in);
void write_bits(const PointSet2& a, std::ostream& out);

/// "GRIDSET m" followed by run lengths of alternating 0 and 1 cells, the
/// first run counting zeros (possibly 0). Cells follow ParabolicRect::index.
GridSet read_gridset(std::istream& in);
void write_gridset(const GridSet& k, std::ostream& out);

enum class WeightEncoding { Rational, Double };

/// "GRIDMEASURE m rational|double" followed by one weight per line. Rational
/// weights are exact dyadic values "num/2^k" (plain "num/den" is also
/// accepted); double weights use 17 significant digits, which round-trips.
GridMeasure read_gridmeasure(std::istream& in);
void write_gridmeasure(const GridMeasure& mu, std::ostream& out, WeightEncoding enc = WeightEncoding::Rational);

PointSet2 load_bits(const FieldCtx& ctx, const std::filesystem::path& path);
void save_bits(const PointSet2& a, const std::filesystem::path& path);
GridSet load_gridset(const std::filesystem::path& path);
void save_gridset(const GridSet& k, const std::filesystem::path& path);
GridMeasure load_gridmeasure(const std::filesystem::path& path);
void save_gridmeasure(const GridMeasure& mu, const std::filesystem::path& path,
                      WeightEncoding enc = WeightEncoding::Rational);

}  // namespace parawork
