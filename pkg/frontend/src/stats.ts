/**
 * Aggregation statistics: mean and 95% confidence interval half-width over
 * per-seed samples, using the t distribution (seed counts are small, so the
 * normal approximation would understate the interval).
 */

export interface Aggregate {
  n: number;
  mean: number;
  /** half-width of the 95% CI; 0 when n < 2 or all samples coincide */
  ci95: number;
}

// Two-sided 95% critical values of Student's t by degrees of freedom.
// Dense through df=30, then the standard coarse rows; beyond 120 the
// normal value is used.
const T95 = [
  12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
  2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
  2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
];
const T95_COARSE: Array<[number, number]> = [
  [40, 2.021], [60, 2.000], [120, 1.980],
];

export function t95(df: number): number {
  if (df < 1) {
    throw new Error(`t distribution needs df >= 1, got ${df}`);
  }
  if (df <= 30) {
    return T95[df - 1];
  }
  for (const [limit, value] of T95_COARSE) {
    if (df <= limit) {
      return value;
    }
  }
  return 1.960;
}

export function mean(values: number[]): number {
  let sum = 0;
  for (const v of values) {
    sum += v;
  }
  return sum / values.length;
}

/** Sample standard deviation (n - 1 denominator). */
export function sampleStd(values: number[]): number {
  const m = mean(values);
  let ss = 0;
  for (const v of values) {
    ss += (v - m) ** 2;
  }
  return Math.sqrt(ss / (values.length - 1));
}

export function aggregate(values: number[]): Aggregate {
  if (values.length === 0) {
    throw new Error("aggregate of zero samples");
  }
  const m = mean(values);
  if (values.length < 2) {
    return { n: 1, mean: m, ci95: 0 };
  }
  const sd = sampleStd(values);
  return {
    n: values.length,
    mean: m,
    ci95: t95(values.length - 1) * (sd / Math.sqrt(values.length)),
  };
}
