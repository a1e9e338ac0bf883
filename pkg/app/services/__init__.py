# Services package: number theory, dyadic intervals, theta strategies, verification suites, benchmarks
