# Copyright 2026 The mird Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Two-stage miscoverage risk decomposition for sampled candidate sets."""

from mird._core import (  # noqa: F401
    CalibrationMethod,
    Candidate,
    CellOutcome,
    ConformalCalibration,
    CoverageFraction,
    Dataset,
    MonteCarloResult,
    PipelineReport,
    PredictionSet,
    QuestionRecord,
    ReportRow,
    ScoredRecord,
    SplitSpec,
    StageOneBounds,
    StratumSizes,
    SynthParams,
    Threshold,
    apply_admission_threshold,
    budget_sweep,
    calibrate_full,
    calibrate_successful_only,
    clopper_pearson_ucb,
    cluster_frequency_uncertainty,
    conformal_rank,
    conformal_threshold,
    empirical_failure_rate,
    exhaustive_coverage_oracle,
    failure_indicator,
    format_double,
    generate_dataset,
    ground_truth_score,
    hoeffding_ucb,
    make_dataset,
    mird_bound,
    monte_carlo,
    oracle_pfail,
    overall_bound_loose,
    overall_bound_tight,
    parse_dataset,
    parse_dataset_file,
    prediction_set,
    prefix,
    reference_score,
    report_from_csv,
    report_to_csv,
    report_to_json,
    run_monte_carlo,
    score_record,
    serialize_dataset,
    stage_one_bounds,
    stratify_difficulty,
    sweep_to_csv,
    two_stage_run,
)

__version__ = "0.1.0"
