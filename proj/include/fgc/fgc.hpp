//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_FGC_HPP_
#define FGC_FGC_HPP_

#include "fgc/codebook.hpp"
#include "fgc/codelength.hpp"
#include "fgc/corpus.hpp"
#include "fgc/errors.hpp"
#include "fgc/eval.hpp"
#include "fgc/fingerprint.hpp"
#include "fgc/io.hpp"
#include "fgc/search.hpp"
#include "fgc/significance.hpp"
#include "fgc/smiles_lexer.hpp"
#include "fgc/symbol_table.hpp"
#include "fgc/validity.hpp"

#endif  // FGC_FGC_HPP_
