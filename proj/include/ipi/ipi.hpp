// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ipi/core/annotation_set.hpp"
#include "ipi/core/category.hpp"
#include "ipi/core/error.hpp"
#include "ipi/core/model.hpp"
#include "ipi/core/span_ops.hpp"
#include "ipi/core/unicode.hpp"

#include "ipi/corpus/bio.hpp"
#include "ipi/corpus/conll.hpp"
#include "ipi/corpus/jsonl.hpp"
#include "ipi/corpus/sectioning.hpp"
#include "ipi/corpus/split.hpp"
#include "ipi/corpus/stats.hpp"
#include "ipi/corpus/tokenizer.hpp"

#include "ipi/agreement/agreement.hpp"
#include "ipi/agreement/report_io.hpp"

#include "ipi/evaluation/evaluation.hpp"
#include "ipi/evaluation/report_io.hpp"

#include "ipi/tagging/default_rules.hpp"
#include "ipi/tagging/grounding.hpp"
#include "ipi/tagging/grounding_io.hpp"
#include "ipi/tagging/rules.hpp"

#include "ipi/redaction/policy_io.hpp"
#include "ipi/redaction/redaction.hpp"
