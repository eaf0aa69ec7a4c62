// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>

#include "ipi/corpus/bio.hpp"

namespace ipi {

/// CoNLL-style block: a `-DOCSTART- <doc_id> <section_index>` sentinel, one
/// `token<TAB>label` line per token, then a blank line.
inline void write_conll(std::ostream& out, const BioSequence& seq)
{
    out << "-DOCSTART- " << seq.doc_id << ' ' << seq.section_index << '\n';
    for (std::size_t i = 0; i < seq.tokens.size(); ++i)
        out << seq.tokens[i].text << '\t' << seq.labels[i] << '\n';
    out << '\n';
}

} // namespace ipi
