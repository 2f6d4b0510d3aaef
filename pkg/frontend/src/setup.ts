/** Setup flow: upload two or more tab files, pick one track per version,
 * submit, and navigate to the comparison view. */

import { createComparison, listComparisons, uploadScore, type UploadResult } from './api';

interface PendingVersion {
  filename: string;
  upload: UploadResult;
  track: number;
}

export function renderSetup(onCreated: (comparisonId: string) => void): HTMLElement {
  const root = document.createElement('section');
  root.className = 'setup';
  root.innerHTML = `
    <h1>tabcompare</h1>
    <p>Upload two or more versions of the same piece (.tabtxt or canonical
    JSON), choose the instrument track for each, and compare them bar by bar.</p>
    <div class="upload-box">
      <input type="file" multiple accept=".tabtxt,.json,.txt" data-role="file-input">
    </div>
    <ul class="version-list" data-role="versions"></ul>
    <div class="error" data-role="error" hidden></div>
    <button type="button" data-role="submit" disabled>Compare</button>
    <span class="hint" data-role="hint">Upload at least 2 versions to compare.</span>
    <div class="previous" data-role="previous"></div>
  `;

  const fileInput = root.querySelector<HTMLInputElement>('[data-role=file-input]')!;
  const versionList = root.querySelector<HTMLUListElement>('[data-role=versions]')!;
  const errorBox = root.querySelector<HTMLElement>('[data-role=error]')!;
  const submit = root.querySelector<HTMLButtonElement>('[data-role=submit]')!;
  const hint = root.querySelector<HTMLElement>('[data-role=hint]')!;
  const previous = root.querySelector<HTMLElement>('[data-role=previous]')!;

  const versions: PendingVersion[] = [];

  function showError(message: string | null): void {
    errorBox.hidden = message === null;
    errorBox.textContent = message ?? '';
  }

  function refresh(): void {
    versionList.replaceChildren();
    versions.forEach((version, i) => {
      const item = document.createElement('li');
      item.className = 'version-item';
      const label = document.createElement('span');
      label.textContent = version.filename;
      const select = document.createElement('select');
      for (const track of version.upload.tracks) {
        const option = document.createElement('option');
        option.value = String(track.index);
        option.textContent = `${track.index}: ${track.name} (${track.strings} strings, ${track.bars} bars)`;
        select.appendChild(option);
      }
      select.value = String(version.track);
      select.addEventListener('change', () => {
        versions[i].track = Number(select.value);
      });
      const remove = document.createElement('button');
      remove.type = 'button';
      remove.textContent = 'remove';
      remove.addEventListener('click', () => {
        versions.splice(i, 1);
        refresh();
      });
      item.append(label, select, remove);
      versionList.appendChild(item);
    });
    submit.disabled = versions.length < 2;
    hint.hidden = versions.length >= 2;
  }

  fileInput.addEventListener('change', async () => {
    showError(null);
    for (const file of Array.from(fileInput.files ?? [])) {
      try {
        const upload = await uploadScore(file);
        versions.push({ filename: file.name, upload, track: 0 });
      } catch (err) {
        showError(`${file.name}: ${(err as Error).message}`);
      }
    }
    fileInput.value = '';
    refresh();
  });

  submit.addEventListener('click', async () => {
    showError(null);
    try {
      const id = await createComparison({
        versions: versions.map((v) => ({
          scoreId: v.upload.id,
          track: v.track,
          name: v.filename.replace(/\.[^.]+$/, ''),
        })),
      });
      onCreated(id);
    } catch (err) {
      showError((err as Error).message);
    }
  });

  void listComparisons()
    .then((summaries) => {
      if (!summaries.length) return;
      const heading = document.createElement('h2');
      heading.textContent = 'Previous comparisons';
      const list = document.createElement('ul');
      for (const summary of summaries) {
        const item = document.createElement('li');
        const link = document.createElement('a');
        link.href = `#/c/${summary.id}`;
        link.textContent = `${summary.versionNames.join(' vs ')} (${summary.createdAt})`;
        item.appendChild(link);
        list.appendChild(item);
      }
      previous.append(heading, list);
    })
    .catch(() => {
      // listing is a convenience; ignore failures
    });

  refresh();
  return root;
}
