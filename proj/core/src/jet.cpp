#include "ultrajet/jet.hpp"

namespace ultrajet {

template class Jet<double>;
template class Jet<Rational>;

template Jet<double> compose(const Jet<double>&, const Jet<double>&);
template Jet<Rational> compose(const Jet<Rational>&, const Jet<Rational>&);
template Jet<double> invert(const Jet<double>&);
template Jet<Rational> invert(const Jet<Rational>&);

}  // namespace ultrajet
