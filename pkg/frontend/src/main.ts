import { ApiClient } from "./api.js";
import { SessionController } from "./session.js";
import { UploadController } from "./upload.js";

// Entry point for the served bundle. The session id is kept in the URL hash
// so a page refresh resumes the same in-flight question.

function bootstrap(): void {
  const doc = document;
  const studentRoot = doc.getElementById("student-view");
  const professorRoot = doc.getElementById("professor-view");
  if (!studentRoot || !professorRoot) {
    return;
  }
  const api = new ApiClient("");
  const session = new SessionController(api, studentRoot);

  const upload = new UploadController(api, professorRoot, (testId) => {
    void session.start(testId).then(() => {
      if (session.sessionId) {
        window.location.hash = `session=${session.sessionId}`;
      }
      showTab("student");
    });
  });
  upload.render();

  const match = window.location.hash.match(/session=([A-Za-z0-9_-]+)/);
  if (match) {
    void session.resume(match[1]);
    showTab("student");
  } else {
    showTab("professor");
  }

  for (const button of doc.querySelectorAll<HTMLButtonElement>("[data-tab]")) {
    button.addEventListener("click", () => showTab(button.dataset.tab ?? "professor"));
  }

  function showTab(name: string): void {
    studentRoot!.hidden = name !== "student";
    professorRoot!.hidden = name !== "professor";
  }
}

if (typeof document !== "undefined") {
  bootstrap();
}
