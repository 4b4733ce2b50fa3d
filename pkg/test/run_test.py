#!/usr/bin/env python
"""
테스트 실행 스크립트

사용법:
  python test/run_test.py [pytest 인자...]

또는 프로젝트 루트에서:
  python -m test.run_test
"""
import os
import subprocess
import sys


def main():
    # 현재 스크립트의 디렉토리 경로
    current_dir = os.path.dirname(os.path.abspath(__file__))
    project_root = os.path.dirname(current_dir)

    # 환경 변수 설정
    env = os.environ.copy()
    env["PYTHONPATH"] = project_root
    env.setdefault("HOMTYPE_THREADS", "2")

    print("=== homtype-ms 테스트 시작 ===")
    print(f"프로젝트 루트: {project_root}")
    print("=" * 50)

    try:
        result = subprocess.run(
            [sys.executable, "-m", "pytest", current_dir, *sys.argv[1:]],
            env=env,
            cwd=project_root,
            check=True
        )
        print("\n✅ 테스트 실행 완료!")
        return result.returncode

    except subprocess.CalledProcessError as e:
        print(f"\n❌ 테스트 실행 실패: {e}")
        return e.returncode
    except Exception as e:
        print(f"\n❌ 예상치 못한 오류: {e}")
        return 1


if __name__ == "__main__":
    exit(main())
