from analysis.must import (
	AssertProof, MustFacts, MustOutcome, MustResult, check_dependencies_must, forward_must,
	must_called_analysis, prove_asserts,
)
