#ifndef DEEPR_INDEXING_HPP
#define DEEPR_INDEXING_HPP

#include "deepr/value.hpp"

namespace deepr {

// `[` with one indexer (or none when i is null-pointer / missing marker)
RPtr subset1(Interp& in, RPtr x, RPtr i);
// `[` with two indexers on a dim-2 value; missing selects everything
RPtr subset_matrix(Interp& in, RPtr x, RPtr i, RPtr j, bool i_missing,
                   bool j_missing);
// `[[`
RPtr extract(Interp& in, RPtr x, RPtr i);
// `x[i] <- value`; returns the modified copy
RPtr subset_assign(Interp& in, RPtr x, RPtr i, RPtr value);
// `x[[i]] <- value`
RPtr extract_assign(Interp& in, RPtr x, RPtr i, RPtr value);

RPtr dollar_get(Interp& in, RPtr x, const std::string& name);
RPtr dollar_set(Interp& in, RPtr x, const std::string& name, RPtr value);

// single element as a length-1 vector (loop iteration, [[-style, no names)
RPtr element_at(const RObject& x, size_t i);

}  // namespace deepr

#endif  // DEEPR_INDEXING_HPP
