from swarmplan.cli import main

raise SystemExit(main())
