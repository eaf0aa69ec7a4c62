// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Embedded copy of rules/default_rules.tsv; a unit test keeps the two in sync.

#include <string_view>

#include "ipi/tagging/rules.hpp"

namespace ipi {

inline constexpr std::string_view kDefaultRulesText = R"RULES(# Default baseline rules for formulaic identifier categories.
# Format: CATEGORY<TAB>KIND<TAB>PATTERN[<TAB>FLAGS]; KIND is regex or gazetteer; FLAGS: i = case-insensitive.
#
# Known limitation: time expressions about the disease itself (durations of
# symptoms and the like) are not excluded and show up as false positives.

# RELTIME: clock times, ages, day counts, weekdays and relative days
RELTIME	regex	\b(?:[01]?[0-9]|2[0-3]):[0-5][0-9](?::[0-5][0-9])?(?:\s?(?:am|pm|a\.m\.|p\.m\.)(?![a-z]))?	i
RELTIME	regex	(?<![:.])\b[0-9]{1,2}\s?(?:am|pm|a\.m\.|p\.m\.)(?![a-z])	i
RELTIME	regex	\b[0-9]{1,3}[- ](?:year|yr|month|mo|week|wk|day|hour|hr)s?[- ]old\b	i
RELTIME	regex	\b[0-9]{1,3}\s?(?:yo\b|y/o\b|y\.o\.)	i
RELTIME	regex	\bage[ds]?\s+[0-9]{1,3}\b	i
RELTIME	regex	\b(?:post[- ]?op(?:erative)?\s+day|POD)\s*(?:number|no\.?|#)?\s*[0-9]{1,3}\b	i
RELTIME	regex	\bday of (?:life|delivery|admission|surgery)\s*(?:number|no\.?|#)?\s*[0-9]{1,3}\b	i
RELTIME	regex	\bhospital day\s*(?:number|no\.?|#)?\s*[0-9]{1,3}\b	i
RELTIME	regex	\bHD\s*#\s*[0-9]{1,3}\b
RELTIME	regex	\b(?:Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday)s?\b	i
RELTIME	regex	\b(?:last|this|next|the following|the previous)\s+(?:night|morning|afternoon|evening|week|weekend|day)\b	i
RELTIME	regex	\b(?:yesterday|today|tomorrow|tonight|overnight|the day before|the next day)\b	i

# FACILITY: units, departments, consulting services and teams
FACILITY	gazetteer	ICU
FACILITY	gazetteer	MICU
FACILITY	gazetteer	SICU
FACILITY	gazetteer	CCU
FACILITY	gazetteer	CSRU
FACILITY	gazetteer	CVICU
FACILITY	gazetteer	NICU
FACILITY	gazetteer	PICU
FACILITY	gazetteer	TSICU
FACILITY	gazetteer	PACU
FACILITY	gazetteer	ED
FACILITY	gazetteer	ER
FACILITY	gazetteer	OR
FACILITY	gazetteer	PCP
FACILITY	gazetteer	ENT
FACILITY	gazetteer	EMS
FACILITY	gazetteer	emergency department	i
FACILITY	gazetteer	emergency room	i
FACILITY	gazetteer	intensive care unit	i
FACILITY	gazetteer	operating room	i
FACILITY	gazetteer	cath lab	i
FACILITY	gazetteer	catheterization lab	i
FACILITY	gazetteer	step-down unit	i
FACILITY	gazetteer	stepdown unit	i
FACILITY	gazetteer	rehab facility	i
FACILITY	gazetteer	rehabilitation facility	i
FACILITY	gazetteer	nursing home	i
FACILITY	gazetteer	skilled nursing facility	i
FACILITY	gazetteer	medical floor	i
FACILITY	gazetteer	surgical floor	i
FACILITY	gazetteer	labor and delivery	i
FACILITY	gazetteer	nursing team	i
FACILITY	gazetteer	medical team	i
FACILITY	gazetteer	surgical team	i
FACILITY	gazetteer	primary care physician	i
FACILITY	gazetteer	orthopedics	i
FACILITY	gazetteer	orthopaedics	i
FACILITY	gazetteer	orthopedic surgery	i
FACILITY	gazetteer	cardiology	i
FACILITY	gazetteer	neurology	i
FACILITY	gazetteer	neurosurgery	i
FACILITY	gazetteer	general surgery	i
FACILITY	gazetteer	cardiothoracic surgery	i
FACILITY	gazetteer	vascular surgery	i
FACILITY	gazetteer	plastic surgery	i
FACILITY	gazetteer	trauma surgery	i
FACILITY	gazetteer	transplant surgery	i
FACILITY	gazetteer	gastroenterology	i
FACILITY	gazetteer	hepatology	i
FACILITY	gazetteer	nephrology	i
FACILITY	gazetteer	infectious disease	i
FACILITY	gazetteer	psychiatry	i
FACILITY	gazetteer	social work	i
FACILITY	gazetteer	physical therapy	i
FACILITY	gazetteer	occupational therapy	i
FACILITY	gazetteer	nutrition	i
FACILITY	gazetteer	hematology	i
FACILITY	gazetteer	oncology	i
FACILITY	gazetteer	pulmonology	i
FACILITY	gazetteer	radiology	i
FACILITY	gazetteer	interventional radiology	i
FACILITY	gazetteer	urology	i
FACILITY	gazetteer	dermatology	i
FACILITY	gazetteer	endocrinology	i
FACILITY	gazetteer	ophthalmology	i
FACILITY	gazetteer	palliative care	i
FACILITY	gazetteer	acute pain service	i
FACILITY	gazetteer	case management	i
FACILITY	regex	\b(?:emergency department|ED|ICU|trauma|orthopedics?|cardiology|neurology|neurosurgery|surgery|surgical|medicine|medical|nursing|psychiatry|renal|GI|pain|social work|nutrition)\s+(?:team|service|consult(?:ation)?)s?\b	i

# LIFESTYLE: tobacco, alcohol, substances, diet and sports seed terms
LIFESTYLE	gazetteer	IVDU
LIFESTYLE	gazetteer	EtOH
LIFESTYLE	gazetteer	tobacco	i
LIFESTYLE	gazetteer	chewing tobacco	i
LIFESTYLE	gazetteer	smoker	i
LIFESTYLE	gazetteer	smokers	i
LIFESTYLE	gazetteer	smokes	i
LIFESTYLE	gazetteer	smoking	i
LIFESTYLE	gazetteer	smoked	i
LIFESTYLE	gazetteer	cigarette	i
LIFESTYLE	gazetteer	cigarettes	i
LIFESTYLE	gazetteer	cigars	i
LIFESTYLE	gazetteer	pack-year	i
LIFESTYLE	gazetteer	pack-years	i
LIFESTYLE	gazetteer	pack years	i
LIFESTYLE	gazetteer	vaping	i
LIFESTYLE	gazetteer	alcohol	i
LIFESTYLE	gazetteer	alcoholic	i
LIFESTYLE	gazetteer	drinks	i
LIFESTYLE	gazetteer	drinking	i
LIFESTYLE	gazetteer	beer	i
LIFESTYLE	gazetteer	beers	i
LIFESTYLE	gazetteer	wine	i
LIFESTYLE	gazetteer	liquor	i
LIFESTYLE	gazetteer	marijuana	i
LIFESTYLE	gazetteer	cannabis	i
LIFESTYLE	gazetteer	cocaine	i
LIFESTYLE	gazetteer	heroin	i
LIFESTYLE	gazetteer	methamphetamine	i
LIFESTYLE	gazetteer	IV drug use	i
LIFESTYLE	gazetteer	illicit drugs	i
LIFESTYLE	gazetteer	recreational drugs	i
LIFESTYLE	gazetteer	diet	i
LIFESTYLE	gazetteer	vegetarian	i
LIFESTYLE	gazetteer	vegan	i
LIFESTYLE	gazetteer	low-sodium diet	i
LIFESTYLE	gazetteer	low sodium diet	i
LIFESTYLE	gazetteer	exercise	i
LIFESTYLE	gazetteer	exercises	i
LIFESTYLE	gazetteer	basketball	i
LIFESTYLE	gazetteer	football	i
LIFESTYLE	gazetteer	soccer	i
LIFESTYLE	gazetteer	baseball	i
LIFESTYLE	gazetteer	hockey	i
LIFESTYLE	gazetteer	running	i
LIFESTYLE	gazetteer	jogging	i
LIFESTYLE	gazetteer	swimming	i
LIFESTYLE	gazetteer	cycling	i
LIFESTYLE	gazetteer	golf	i
LIFESTYLE	gazetteer	tennis	i
LIFESTYLE	gazetteer	yoga	i
LIFESTYLE	gazetteer	gym	i
LIFESTYLE	gazetteer	hiking	i
LIFESTYLE	gazetteer	marathon	i
)RULES";

inline const RuleSet& default_rules()
{
    static const RuleSet rules = RuleSet::parse(kDefaultRulesText, "rules:default");
    return rules;
}

} // namespace ipi
