function comment(mediaId, text) {
  $.post('https://api.instagram.com/v1/media/' + mediaId + '/comments', {text: text});
}
