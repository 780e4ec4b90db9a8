#pragma once

#include <json.hpp>
#include <string>

#include "multfun/characters.hpp"
#include "multfun/ergodic.hpp"
#include "multfun/levelsets.hpp"
#include "multfun/pretentious.hpp"
#include "multfun/seminorms.hpp"

namespace multfun {

inline constexpr const char* kVersion = "multfun 0.1.0";

/// Insertion-ordered so reports serialize byte-identically across runs.
using Json = nlohmann::ordered_json;

Json to_json(cplx z);
Json to_json(const Rational& r);
Json to_json(const MultiplicativeFunction& f);
Json to_json(const DirichletCharacter& chi);
Json to_json(const WindowTest& w);
Json to_json(const DistanceProfile& d);
Json to_json(const EulerProduct& e);
Json to_json(const ApMean& a);
Json to_json(const MeanValueReport& m);
Json to_json(const CharacterHit& h);
Json to_json(const AperiodicityVerdict& v);
Json to_json(const RapVerdict& v);
Json to_json(const GowersReport& g);
Json to_json(const SpectrumScan& s);
Json to_json(const PeriodicApproximant& p);
Json to_json(const Target& z);
/// Summary plus at most `max_members` leading members.
Json to_json(const LevelSet& E, std::size_t max_members = 50);
Json to_json(const DensityProfile& d);
Json to_json(const ConcentrationAnalysis& c);
Json to_json(const ZeroRepair& z);
Json to_json(const KChiResult& k);
Json to_json(const StructurePair& s);
Json to_json(const DivisibilityReport& d);
Json to_json(const RecurrenceReport& r);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// Header `N,Ntilde,s,method,value`.
std::string gowers_csv(const GowersReport& g);
/// Header `P,partial_sum`.
std::string distance_csv(const DistanceProfile& d);
/// Header `J,average`.
std::string running_csv(const RecurrenceReport& r);

}  // namespace multfun
