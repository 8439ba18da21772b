#!/usr/bin/env python3
"""
Test runner for the randomization inference engine
Provides different test execution options
"""
import subprocess
import sys


def run_command(cmd, description):
    """
    Run a command and report its outcome

    Args:
        cmd: Command to run
        description: Description of what the command does
    """
    print(f"\n{'='*60}")
    print(f"Running: {description}")
    print(f"Command: {' '.join(cmd)}")
    print(f"{'='*60}")

    result = subprocess.run(cmd, capture_output=False)

    if result.returncode != 0:
        print(f"\n[FAILED] {description} failed with exit code {result.returncode}")
        return False
    print(f"\n[SUCCESS] {description} completed successfully")
    return True


def main():
    """Main test runner function"""
    pytest = [sys.executable, "-m", "pytest"]
    test_options = {
        "all": ("Run all tests, including slow acceptance runs", pytest + ["tests/", "-v"]),
        "fast": ("Run tests without the slow acceptance runs", pytest + ["tests/", "-q", "-m", "not slow"]),
        "core": ("Run core module tests", pytest + ["tests/core/", "-v"]),
        "models": ("Run model tests", pytest + ["tests/models/", "-v"]),
        "engine": ("Run inference engine tests", pytest + ["tests/engine/", "-v", "-m", "not slow"]),
        "harness": ("Run simulation harness tests", pytest + ["tests/harness/", "-v", "-m", "not slow"]),
        "cli": ("Run command-line tests", pytest + ["tests/cli/", "-v"]),
        "utils": ("Run utils module tests", pytest + ["tests/utils/", "-v"]),
        "coverage": ("Run tests with coverage", pytest + ["tests/", "-m", "not slow", "--cov=randomization_inference", "--cov-report=html", "--cov-report=term"]),
        "failed": ("Run only failed tests", pytest + ["tests/", "--lf", "-v"]),
        "check": ("Run a quick smoke test", pytest + ["tests/engine/test_estimators.py::TestVarianceReport", "-v"]),
    }

    if len(sys.argv) == 1:
        print("Randomization Inference Test Runner")
        print("="*40)
        print("Available test options:")
        for key, (description, _) in test_options.items():
            print(f"  {key:10} - {description}")
        print("\nUsage: python run_tests.py [option]")
        print("Example: python run_tests.py fast")
        return

    option = sys.argv[1].lower()

    if option not in test_options:
        print(f"[ERROR] Unknown option: {option}")
        print("Available options:", ", ".join(test_options.keys()))
        return

    description, cmd = test_options[option]
    success = run_command(cmd, description)

    if success:
        print("\n[COMPLETE] Test execution completed successfully!")
        if option == "coverage":
            print("[INFO] Coverage report generated in htmlcov/index.html")
    else:
        print("\n[FAILED] Test execution failed!")
        sys.exit(1)


if __name__ == "__main__":
    main()
