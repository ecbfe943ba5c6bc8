#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hyperrate {

using Rational = mpq_class;

// Always "num/den", including integers ("1/1", "0/1").
std::string to_string(const Rational& q);

// Accepts "num/den" or a bare integer.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

} // namespace hyperrate
