#pragma once

#include <boost/rational.hpp>
#include <string>
#include <vector>

namespace ekzb {

using Rat = boost::rational<long long>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

RatMat rat_identity(int n);
/// Inverse by Gauss-Jordan elimination; throws std::domain_error if singular.
RatMat rat_inverse(const RatMat& m);
RatVec rat_mul(const RatMat& m, const RatVec& v);
RatMat rat_mul(const RatMat& a, const RatMat& b);
Rat rat_dot(const RatVec& a, const RatVec& b);
double to_double(Rat r);
std::string to_string(Rat r);
bool is_integer(Rat r);

}  // namespace ekzb
