from hera.cli import main

raise SystemExit(main())
